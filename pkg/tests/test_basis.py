from fractions import Fraction

import pytest

from fell_metrics.basis import (
    INF,
    AmbientSpace,
    Interval,
    IntervalSet,
    OpenSet,
    basis_element,
    candidate_interval,
    closed_interval,
    compact_exhaustion,
    distance,
    enumerate_rational,
    interior,
    intersects,
    normalize_open,
    open_interval,
    subset,
)
from fell_metrics.errors import AmbientMismatchError, PreconditionError, RepresentationError

R = AmbientSpace.REALS
UNIT = AmbientSpace.UNIT_INTERVAL


def test_rational_enumeration_prefix():
    expected = ["0", "-1", "1", "-2", "-1/2", "1/2", "2", "-3", "-1/3", "1/3", "3"]
    assert [enumerate_rational(i) for i in range(1, 12)] == [Fraction(x) for x in expected]


def test_rational_enumeration_rejects_zero_index():
    with pytest.raises(PreconditionError):
        enumerate_rational(0)


def test_candidates_on_reals():
    assert candidate_interval(1, R) == Interval(-1, 0)
    assert candidate_interval(2, R) == Interval(0, 1)
    assert candidate_interval(3, R) == Interval(-1, 1)
    assert candidate_interval(4, R) == Interval(-2, 0)


def test_candidates_on_unit_interval_are_clipped():
    assert candidate_interval(1, UNIT) == Interval(0, 1, True, True)
    assert candidate_interval(2, UNIT) == Interval(0, 1, False, True)
    assert candidate_interval(3, UNIT) == Interval(0, Fraction(1, 2), True, True)
    assert candidate_interval(4, UNIT) == Interval(0, 1, False, True)


def test_basis_elements_follow_binary_digits():
    assert basis_element(1, R) == open_interval(-1, 0)
    assert basis_element(2, R) == open_interval(0, 1)
    # биты 1, 3, 4: (-1,0) ∪ (-1,1) ∪ (-2,0)
    assert basis_element(13, R) == open_interval(-2, 1)
    assert basis_element(3, R) == OpenSet(R, (Interval(-1, 0), Interval(0, 1)))


def test_basis_elements_are_bounded_and_open():
    for space in AmbientSpace:
        for n in range(1, 65):
            u = basis_element(n, space)
            assert not u.is_empty
            assert u.is_bounded
            assert u.is_open()


def test_basis_index_must_be_positive():
    with pytest.raises(PreconditionError):
        basis_element(0, R)


def test_compact_exhaustion_shrinks_open_ends():
    assert compact_exhaustion(1, 2, R) == closed_interval(Fraction(1, 4), Fraction(3, 4))
    assert compact_exhaustion(2, 13, R) == closed_interval(Fraction(-3, 2), Fraction(1, 2))


def test_compact_exhaustion_keeps_closed_ambient_end():
    # U_2 = [0,1) в [0,1]
    assert compact_exhaustion(1, 2, UNIT) == closed_interval(0, Fraction(3, 4), UNIT)


def test_compact_exhaustion_is_nested():
    for n in (1, 3, 13, 40):
        for m in range(1, 6):
            inner = compact_exhaustion(m, n, R)
            outer = compact_exhaustion(m + 1, n, R)
            assert subset(inner, interior(outer))
            assert subset(outer, basis_element(n, R))


def test_normalize_merges_overlapping_and_sorts():
    raw = [Interval(2, 3), Interval(0, 1), Interval(Fraction(1, 2), Fraction(3, 2))]
    assert normalize_open(raw) == OpenSet(R, (Interval(0, Fraction(3, 2)), Interval(2, 3)))


def test_normalize_keeps_touching_open_intervals_apart():
    u = normalize_open([Interval(0, 1), Interval(1, 2)])
    assert len(u) == 2
    assert not u.contains(Fraction(1))


def test_normalize_is_idempotent():
    u = normalize_open([Interval(0, 1), Interval(-1, Fraction(1, 2)), Interval(5, 6)])
    assert normalize_open(u.intervals) == u


def test_open_set_rejects_closed_interior_end():
    with pytest.raises(RepresentationError):
        OpenSet(R, (Interval(0, 1, False, True),))


def test_unit_interval_allows_closed_ambient_end():
    u = OpenSet(UNIT, (Interval(0, Fraction(1, 2), False, True),))
    assert u.contains(Fraction(0))


def test_predicates():
    k = closed_interval(Fraction(1, 4), Fraction(1, 2))
    assert subset(k, open_interval(0, 1))
    assert not subset(closed_interval(0, 1), open_interval(0, 1))
    assert intersects(open_interval(0, 1), open_interval(Fraction(1, 2), 2))
    assert not intersects(open_interval(0, 1), open_interval(1, 2))
    assert interior(closed_interval(0, 1)) == open_interval(0, 1)
    assert distance(closed_interval(0, 1), closed_interval(2, 3)) == 1
    assert distance(closed_interval(0, 1), IntervalSet(R, ())) == INF


def test_complement_on_reals_and_unit():
    c = open_interval(0, 1).complement()
    assert c == IntervalSet(R, (Interval(-INF, 0, True, False), Interval(1, INF, False, True)))
    assert open_interval(0, 1, UNIT).complement() == IntervalSet(
        UNIT, (Interval(0, 0, False, False), Interval(1, 1, False, False))
    )


def test_mixed_spaces_are_rejected():
    with pytest.raises(AmbientMismatchError):
        subset(open_interval(0, 1, R), open_interval(0, 1, UNIT))


def test_float_endpoints_are_rejected():
    with pytest.raises(RepresentationError):
        Interval(0.5, 1)
