from fractions import Fraction

import pytest

from fell_metrics.basis import AmbientSpace, Interval, IntervalSet, OpenSet, closed_interval, open_interval
from fell_metrics.errors import (
    AmbientMismatchError,
    DomainError,
    IncompatibilityError,
    InjectivityError,
    PreconditionError,
    RepresentationError,
)
from fell_metrics.partial_map import (
    GammaMap,
    PartialMap,
    Piece,
    affine_on,
    compose,
    constant_on,
    empty_map,
    equal,
    evaluate,
    from_function,
    identity_on,
    image,
    image_of_compact,
    invert,
    join,
    preimage,
    restrict,
)

R = AmbientSpace.REALS
UNIT = AmbientSpace.UNIT_INTERVAL
HALF = Fraction(1, 2)


def tent() -> PartialMap:
    """0 -> 0, 1/2 -> 1, 1 -> 0 на (0,1)"""
    return from_function(open_interval(0, 1), [HALF], lambda x: 1 - abs(2 * x - 1))


def test_evaluate_linear_interpolation():
    f = affine_on(open_interval(0, 1), 2, 0)
    assert evaluate(f, Fraction(1, 4)) == HALF
    assert f(Fraction(1, 3)) == Fraction(2, 3)


def test_evaluate_outside_domain():
    f = affine_on(open_interval(0, 1), 2, 0)
    with pytest.raises(DomainError) as e:
        evaluate(f, 1)
    assert e.value.point == 1


def test_redundant_nodes_are_dropped():
    f = PartialMap(R, R, (Piece(Interval(0, 1), ((0, 0), (HALF, HALF), (1, 1))),))
    assert f.pieces[0].nodes == ((0, 0), (1, 1))
    assert f == identity_on(open_interval(0, 1))


def test_identity_on_reals_is_canonical():
    f = identity_on(OpenSet(R, (R.whole,)))
    assert f.pieces[0].nodes == ((0, 0), (1, 1))
    assert f(Fraction(-100)) == -100


def test_nodes_must_reach_component_ends():
    with pytest.raises(RepresentationError):
        PartialMap(R, R, (Piece(Interval(0, 1), ((0, 0), (HALF, 1))),))


def test_unit_codomain_is_enforced():
    with pytest.raises(RepresentationError):
        affine_on(open_interval(0, 1, UNIT), 2, 0)


def test_image_of_tent_keeps_attained_maximum():
    assert image(tent()) == IntervalSet(R, (Interval(0, 1, True, False),))


def test_image_of_empty_map():
    assert image(empty_map()).is_empty


def test_preimage_of_closed_interval():
    f = affine_on(open_interval(0, 1), 2, 0)
    pre = preimage(f, closed_interval(0, HALF))
    assert pre == IntervalSet(R, (Interval(0, Fraction(1, 4), True, False),))


def test_preimage_of_constant_piece():
    f = constant_on(open_interval(0, 1), 3)
    assert preimage(f, open_interval(2, 4)) == open_interval(0, 1)
    assert preimage(f, open_interval(4, 5)).is_empty


def test_image_of_compact():
    f = affine_on(open_interval(-1, 2), -1, 0)
    assert image_of_compact(f, closed_interval(0, 1)) == closed_interval(-1, 0)
    with pytest.raises(DomainError):
        image_of_compact(f, closed_interval(0, 3))


def test_compose_with_identity_is_neutral():
    identity = identity_on(OpenSet(R, (R.whole,)))
    assert compose(identity, tent()) == tent()
    assert compose(tent(), identity_on(open_interval(0, 1))) == tent()


def test_compose_doubles_and_shrinks_domain():
    f = affine_on(open_interval(0, 1), 2, 0)
    h = compose(f, f)
    assert h.domain == open_interval(0, HALF)
    assert h == affine_on(open_interval(0, HALF), 4, 0)


def test_compose_breaks_at_preimages_of_outer_nodes():
    g = affine_on(open_interval(0, 1), 1, 0)
    h = compose(tent(), g)
    assert h == tent()


def test_compose_checks_spaces():
    f = identity_on(open_interval(0, 1, UNIT))
    g = identity_on(open_interval(0, 1, R))
    with pytest.raises(AmbientMismatchError):
        compose(f, g)


def test_invert_affine():
    f = affine_on(open_interval(0, 1), 2, 0)
    assert invert(f).base == affine_on(open_interval(0, 2), HALF, 0)
    assert invert(invert(f)).base == f


def test_invert_decreasing_map():
    f = affine_on(open_interval(0, 1), -1, 1)
    assert invert(f).base == f


def test_invert_reports_witness_for_tent():
    with pytest.raises(InjectivityError) as e:
        invert(tent())
    x1, x2 = e.value.witness
    assert x1 != x2
    assert evaluate(tent(), x1) == evaluate(tent(), x2)


def test_invert_constant_map_fails():
    with pytest.raises(InjectivityError) as e:
        invert(constant_on(open_interval(0, 1), 0))
    x1, x2 = e.value.witness
    assert x1 != x2


def test_invert_overlapping_pieces_fails():
    f = identity_on(OpenSet(R, (Interval(0, 1), Interval(2, 3))))
    g = join([f, affine_on(open_interval(4, 5), 1, -4)])
    with pytest.raises(InjectivityError):
        invert(g)


def test_invert_requires_open_image():
    # [0,1/2) -> [1/4,3/4): замкнутый конец 1/4 не является концом X
    f = affine_on(OpenSet(UNIT, (Interval(0, HALF, False, True),)), 1, Fraction(1, 4))
    with pytest.raises(RepresentationError):
        GammaMap(f)


def test_invert_requires_same_space():
    f = identity_on(open_interval(0, 1, UNIT))
    g = PartialMap(UNIT, R, f.pieces)
    with pytest.raises(PreconditionError):
        invert(g)


def test_empty_map_inverts_to_empty():
    assert invert(empty_map(UNIT)).is_empty


def test_restrict_to_subdomain():
    f = tent()
    g = restrict(f, open_interval(0, Fraction(1, 4)))
    assert g == affine_on(open_interval(0, Fraction(1, 4)), 2, 0)


def test_join_of_compatible_pieces():
    a = identity_on(open_interval(0, 1))
    b = identity_on(open_interval(HALF, 2))
    assert join([a, b]) == identity_on(open_interval(0, 2))


def test_join_with_disjoint_domains():
    a = identity_on(open_interval(0, 1))
    b = constant_on(open_interval(2, 3), 5)
    joined = join([a, b])
    assert joined.domain == OpenSet(R, (Interval(0, 1), Interval(2, 3)))
    assert joined(Fraction(5, 2)) == 5


def test_join_reports_disagreement():
    a = identity_on(open_interval(0, 1))
    b = affine_on(open_interval(HALF, 2), 1, 1)
    with pytest.raises(IncompatibilityError) as e:
        join([a, b])
    assert HALF < e.value.point < 1


def test_equal_ignores_representation():
    a = PartialMap(R, R, (Piece(Interval(0, 1), ((0, 0), (Fraction(1, 3), Fraction(1, 3)), (1, 1))),))
    assert equal(a, identity_on(open_interval(0, 1)))
    assert not equal(a, identity_on(open_interval(0, 2)))
