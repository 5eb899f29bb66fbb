import math

import numpy as np
import pytest

from modtop.errors import InvalidExponentError
from modtop.exponents import (AffineExponent, CustomExponent,
                              PiecewiseConstExponent, ReciprocalExponent,
                              TableExponent, parse_exponent)


def test_table_metadata():
    t = TableExponent([2.0, 3.0, 2.5])
    assert t.dimension == 3
    assert t.p_sup == 3.0
    assert not t.unbounded
    assert list(t.values(2, 3)) == [3.0, 2.5]


def test_table_rejects_exponent_below_one():
    with pytest.raises(InvalidExponentError):
        TableExponent([2.0, 0.5])


def test_affine_growth_class():
    pn = AffineExponent(1.0, 0.0)
    assert pn.unbounded and pn.monotone
    assert pn.value(7) == 7.0
    const = AffineExponent(0.0, 2.0)
    assert not const.unbounded
    assert const.p_sup == 2.0
    with pytest.raises(InvalidExponentError):
        AffineExponent(0.0, 0.5)
    with pytest.raises(InvalidExponentError):
        AffineExponent(-1.0, 5.0)


def test_custom_lazy_validation():
    bad = CustomExponent(lambda n: n - 2.0, monotone=True, unbounded=True)
    with pytest.raises(InvalidExponentError):
        bad.values(1, 10)
    good = CustomExponent(lambda n: 1.0 + np.log(n + 1.0), monotone=True,
                          unbounded=True)
    assert good.value(1) == pytest.approx(1.0 + math.log(2.0))


def test_reciprocal_domain_checks():
    r = ReciprocalExponent(0.0, 0.5)
    assert r.unbounded
    assert r(0.25) == 4.0
    assert ReciprocalExponent(0.25, 0.5).p_sup == 4.0
    with pytest.raises(InvalidExponentError):
        ReciprocalExponent(0.0, 1.5)  # p would dip below 1


def test_piecewise_const():
    p = PiecewiseConstExponent([0.0, 0.5, 1.0], [2.0, 3.0])
    assert p(0.25) == 2.0
    assert p(0.75) == 3.0
    assert p.p_sup == 3.0
    with pytest.raises(InvalidExponentError):
        PiecewiseConstExponent([0.0, 1.0], [0.9])


@pytest.mark.parametrize("text,kind", [
    ("identity", AffineExponent),
    ("affine:1,0", AffineExponent),
    ("const:2", AffineExponent),
    ("table:2,3,2.5", TableExponent),
    ("reciprocal:0,0.5", ReciprocalExponent),
    ("piecewise:0,0.5,2;0.5,1,3", PiecewiseConstExponent),
])
def test_parse_grammar(text, kind):
    assert isinstance(parse_exponent(text), kind)


def test_parse_rejects_unknown():
    with pytest.raises(InvalidExponentError):
        parse_exponent("exp:2")
    with pytest.raises(InvalidExponentError):
        parse_exponent("piecewise:0,0.5,2;0.6,1,3")  # gap between segments
