import pytest

from modtop.errors import IncompatibleTailError
from modtop.sequences import SequenceVec


def test_runs_are_sorted_filled_and_disjoint():
    x = SequenceVec(((5, 7, 2.0), (1, 2, 1.0)))
    assert x.runs == ((1, 2, 1.0), (3, 4, 0.0), (5, 7, 2.0))
    assert x.tail == 0.0
    assert x.tail_start == 8


def test_overlap_rejected():
    with pytest.raises(ValueError):
        SequenceVec(((1, 3, 1.0), (3, 4, 2.0)))


def test_value_at_and_sup():
    x = SequenceVec(((1, 2, -3.0),), tail=0.5)
    assert x.value_at(1) == -3.0
    assert x.value_at(2) == -3.0
    assert x.value_at(99) == 0.5
    assert x.sup_abs() == 3.0


def test_subtraction_refines_to_common_breakpoints():
    a = SequenceVec(((1, 5, 1.0),), tail=0.5)
    b = SequenceVec(((1, 2, 0.25), (3, 8, 1.0)))
    d = a - b
    assert d.value_at(1) == 0.75
    assert d.value_at(4) == 0.0
    assert d.value_at(6) == -0.5
    assert d.value_at(7) == -0.5
    assert d.value_at(9) == 0.5
    assert d.tail == 0.5


def test_constant_tails_combine_exactly():
    ones = SequenceVec.constant(1.0)
    half = SequenceVec.constant(0.5)
    d = ones - half
    assert d.runs == ()
    assert d.tail == 0.5


def test_prefix_clips_runs_and_materializes_tail():
    half = SequenceVec.constant(0.5)
    p = half.prefix(3)
    assert p.finite_support
    assert [p.value_at(i) for i in (1, 2, 3, 4)] == [0.5, 0.5, 0.5, 0.0]
    x = SequenceVec(((1, 10, 2.0),))
    assert x.prefix(4).runs == ((1, 4, 2.0),)


def test_scale_and_add():
    x = SequenceVec.sparse({2: 1.0, 5: -2.0})
    y = (x.scale(2.0) + x).scale(0.5)
    assert y.value_at(2) == 1.5
    assert y.value_at(5) == -3.0


def test_dimension_check():
    SequenceVec.from_values([1.0, 2.0]).check_against_dimension(2)
    with pytest.raises(IncompatibleTailError):
        SequenceVec.constant(1.0).check_against_dimension(3)
    with pytest.raises(IncompatibleTailError):
        SequenceVec.sparse({4: 1.0}).check_against_dimension(3)
