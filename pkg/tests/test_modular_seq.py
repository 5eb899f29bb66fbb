"""Sequence modular evaluation against hand-checked and oracle values."""

import math

import numpy as np
import pytest

from modtop.config import EvalConfig
from modtop.errors import IncompatibleTailError
from modtop.exponents import AffineExponent, CustomExponent, TableExponent
from modtop.modular import (eval_seq_modular, modular_diameter,
                            modular_distance, scaled_modular)
from modtop.sequences import SequenceVec

PN = AffineExponent(1.0, 0.0)  # p_n = n


def test_half_on_first_two_coordinates():
    x = SequenceVec(((1, 2, 0.5),))
    mv = eval_seq_modular(x, PN)
    assert mv.is_finite
    assert mv.value == pytest.approx(0.75, abs=1e-15)


def test_zero_vector():
    mv = eval_seq_modular(SequenceVec.zero(), PN)
    assert mv.is_finite and mv.value == 0.0


def test_unit_tail_diverges_with_nondecreasing_certificate():
    x = SequenceVec(((1, 5, -0.5),), tail=-1.0)
    mv = eval_seq_modular(x, PN)
    assert mv.is_infinite
    cert = mv.certificate
    assert cert.kind == "terms-eventually-nondecreasing-and-ge-delta"
    assert cert.delta == 1.0
    assert cert.check_window()
    # recompute the window independently: terms are |c|^{p_n} = 1
    assert cert.check_window(log_term_at=lambda n: PN.value(n) * math.log(1.0))


def test_sparse_witness_partial_sum():
    # values p^{-1/p} at n_k = k^2 + 1; modular is sum of 1/p, brute-forced here
    K = 50
    entries = {}
    expected = 0.0
    for k in range(1, K + 1):
        n = k * k + 1
        entries[n] = n ** (-1.0 / n)
        expected += 1.0 / n
    mv = eval_seq_modular(SequenceVec.sparse(entries), PN)
    assert mv.is_finite
    assert mv.value == pytest.approx(expected, rel=1e-13)


def test_geometric_tail_closed_form_is_exact():
    half = SequenceVec.constant(0.5)
    assert eval_seq_modular(half, PN).value == pytest.approx(1.0, abs=1e-14)
    for n in range(1, 41):
        d = modular_distance(half, half.prefix(n), PN)
        assert d.is_finite
        assert abs(d.value - 2.0 ** -n) <= 1e-12 * 2.0 ** -n


def test_scaling_identity_and_divergence():
    half = SequenceVec.constant(0.5)
    same = scaled_modular(half, PN, 1.0)
    assert same.value == eval_seq_modular(half, PN).value
    doubled = scaled_modular(half, PN, 2.0)
    assert doubled.is_infinite
    assert doubled.certificate.delta == 1.0


def test_overflow_certificate():
    x = SequenceVec(((1, 700, 3.0),))
    mv = eval_seq_modular(x, PN)
    assert mv.is_infinite
    assert mv.certificate.kind == "overflow-cap-exceeded"
    assert mv.certificate.log_term > mv.certificate.cap


def test_overflow_cap_configurable():
    x = SequenceVec(((1, 10, 3.0),))
    assert eval_seq_modular(x, PN).is_finite
    tight = EvalConfig(overflow_cap=5.0)
    assert eval_seq_modular(x, PN, tight).is_infinite


def test_constant_exponent_tail_diverges():
    mv = eval_seq_modular(SequenceVec.constant(0.5), AffineExponent(0.0, 2.0))
    assert mv.is_infinite
    assert mv.certificate.delta == pytest.approx(0.25)


def test_table_rejects_tails_and_wide_support():
    t = TableExponent([2.0, 3.0])
    with pytest.raises(IncompatibleTailError):
        eval_seq_modular(SequenceVec.constant(0.5), t)
    with pytest.raises(IncompatibleTailError):
        eval_seq_modular(SequenceVec.sparse({3: 1.0}), t)
    # zero padding beyond the dimension is fine
    mv = eval_seq_modular(SequenceVec(((1, 2, 0.5), (3, 6, 0.0))), t)
    assert mv.value == pytest.approx(0.25 + 0.125)


def test_brute_force_equivalence_on_tables():
    rng = np.random.default_rng(7)
    for _ in range(40):
        dim = int(rng.integers(1, 9))
        table = TableExponent(1.0 + 5.0 * rng.random(dim))
        vals = rng.uniform(-2.0, 2.0, dim)
        direct = sum(abs(v) ** p for v, p in zip(vals, table.table))
        mv = eval_seq_modular(SequenceVec.from_values(vals), table)
        assert mv.value == pytest.approx(direct, rel=1e-14)


def test_custom_monotone_tail_against_series_oracle():
    # sum over n of (1/16)^(1 + log(n+1));  oracle value via high-precision
    # summation with integral remainder, frozen before the build
    p = CustomExponent(lambda n: 1.0 + np.log(n + 1.0), monotone=True,
                       unbounded=True)
    cfg = EvalConfig(series_tol=1e-8)
    mv = eval_seq_modular(SequenceVec.constant(1.0 / 16.0), p, cfg)
    assert mv.is_finite
    oracle = 0.01588374647278142537
    assert abs(mv.value - oracle) <= mv.error_bound
    assert mv.error_bound < 1e-6


def test_custom_plateau_is_indeterminate_not_wrong():
    # monotone but eventually flat: the series truly diverges, and the
    # ratio-pinned guard refuses to certify either way
    p = CustomExponent(lambda n: np.minimum(np.asarray(n, dtype=float), 5.0) / 1.0 + 1.0,
                       monotone=True, unbounded=True)
    cfg = EvalConfig(ratio_window=1000, max_tail_terms=10_000)
    mv = eval_seq_modular(SequenceVec.constant(0.5), p, cfg)
    assert mv.is_indeterminate
    assert "ratio" in mv.reason


def test_undeclared_growth_tail_is_indeterminate():
    p = CustomExponent(lambda n: 2.0 + (np.asarray(n) % 3), monotone=False,
                       unbounded=False)
    mv = eval_seq_modular(SequenceVec.constant(0.5), p)
    assert mv.is_indeterminate


def test_nonmonotone_tail_above_one_uses_comparison_rule():
    p = CustomExponent(lambda n: 2.0 + (np.asarray(n) % 3), monotone=False,
                       unbounded=False)
    mv = eval_seq_modular(SequenceVec.constant(1.5), p)
    assert mv.is_infinite
    assert mv.certificate.rule == "constant-tail-term-floor"
    assert mv.certificate.check()


def test_modular_distance_examples():
    half = SequenceVec.constant(0.5)
    assert modular_distance(half, half, PN).value == 0.0
    ones = SequenceVec.constant(1.0)
    mv = modular_distance(half.prefix(12), ones, PN)
    assert mv.is_infinite


def test_modular_diameter():
    half = SequenceVec.constant(0.5)
    assert modular_diameter([half], PN).value == 0.0
    mv = modular_diameter([SequenceVec.zero(), half], PN)
    assert mv.value == pytest.approx(1.0, abs=1e-14)
    mv = modular_diameter([SequenceVec.constant(1.0), half.prefix(9)], PN)
    assert mv.is_infinite
    with pytest.raises(Exception):
        modular_diameter([], PN)
