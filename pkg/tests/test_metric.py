from fractions import Fraction

import pytest

from fell_metrics.basis import AmbientSpace, IntervalSet, OpenSet, basis_element, closed_interval, open_interval
from fell_metrics.enclosure import Enclosure, TruncationPlan, enclose_series, least_cutoff
from fell_metrics.errors import (
    DomainError,
    InjectivityError,
    PreconditionError,
    SearchExhaustedError,
    ToleranceError,
)
from fell_metrics.metric import (
    beta,
    beta_mn,
    beta_n,
    d_gamma,
    empty_separation_witness,
    in_ball,
    in_compact_open,
    in_compact_open_inv,
    in_countable_subbasis,
    in_domain_hit,
    in_domain_miss,
    in_image_hit,
    in_image_miss,
    in_l,
    refine_ball,
    separation_radius,
    sup_distance,
)
from fell_metrics.partial_map import affine_on, constant_on, empty_map, from_function, identity_on

R = AmbientSpace.REALS
UNIT = AmbientSpace.UNIT_INTERVAL
TOL = Fraction(1, 2 ** 10)
HALF = Fraction(1, 2)
WIDE = open_interval(-1, 2)


def shifted(c):
    return affine_on(WIDE, 1, c)


def test_truncation_plan_for_tolerance():
    plan = TruncationPlan.for_tolerance(Fraction(1, 4096))
    assert (plan.n_cutoff, plan.m_cutoff) == (13, 13)
    assert plan.tail == Fraction(1, 4096)
    assert least_cutoff(Fraction(1)) == 1


def test_truncation_plan_rejects_bad_tolerance():
    with pytest.raises(ToleranceError):
        TruncationPlan.for_tolerance(0)
    with pytest.raises(ToleranceError):
        TruncationPlan.for_tolerance(Fraction(-1, 2))
    with pytest.raises(ToleranceError):
        TruncationPlan.for_tolerance(Fraction(1, 4096), n_cutoff=5)


def test_enclosure_arithmetic():
    e = Enclosure(Fraction(1, 4), HALF) + Enclosure(0, Fraction(1, 4))
    assert e == Enclosure(Fraction(1, 4), Fraction(3, 4))
    assert e.width == HALF
    with pytest.raises(ValueError):
        Enclosure(1, 0)


def test_enclose_series_constant_terms():
    e = enclose_series(lambda m: 1, Fraction(1, 8))
    assert e.contains(1)
    assert e.width <= Fraction(1, 8)


def test_sup_distance_is_capped():
    k = closed_interval(0, 1)
    identity = identity_on(WIDE)
    assert sup_distance(identity, shifted(HALF), k) == HALF
    assert sup_distance(identity, affine_on(WIDE, 3, 0), k) == 1
    assert sup_distance(identity, identity, k) == 0


def test_sup_distance_finds_interior_kink():
    tent = from_function(open_interval(0, 1), [HALF], lambda x: 1 - abs(2 * x - 1))
    zero = constant_on(open_interval(0, 1), 0)
    k = closed_interval(Fraction(1, 4), Fraction(3, 4))
    assert sup_distance(tent, zero, k) == 1
    assert sup_distance(tent, constant_on(open_interval(0, 1), HALF), k) == HALF


def test_sup_distance_errors():
    f = identity_on(open_interval(0, 1))
    with pytest.raises(DomainError) as e:
        sup_distance(f, f, closed_interval(0, 1))
    assert e.value.point == 0
    with pytest.raises(PreconditionError):
        sup_distance(f, f, IntervalSet(R, ()))


def test_beta_mn_cases():
    # U_2 = (0,1): K_{(m+1)2} ⊆ dom, обе функции вне L_m2
    f = identity_on(open_interval(0, 1))
    g = affine_on(open_interval(0, 1), 1, Fraction(1, 8))
    for m in range(1, 6):
        assert not in_l(f, m, 2)
        assert beta_mn(f, g, m, 2) == Fraction(1, 8)
    empty = empty_map()
    assert in_l(empty, 1, 2)
    assert beta_mn(empty, f, 1, 2) == 1
    # U_1 = (-1,0) не лежит в dom f, f и ∅ обе в L_m1
    assert beta_mn(empty, f, 1, 1) == 0
    assert beta_mn(f, f, 3, 7) == 0


def test_beta_mn_requires_positive_indices():
    f = identity_on(open_interval(0, 1))
    with pytest.raises(PreconditionError):
        beta_mn(f, f, 0, 1)


def test_beta_enclosure_width_and_identity():
    f = identity_on(open_interval(0, 1))
    e = beta(f, f, TOL)
    assert e.lo == 0
    assert e.width <= TOL


@pytest.mark.parametrize("tol", [0, Fraction(-1, 2)])
def test_beta_checks_tolerance_with_explicit_plan(tol):
    f = identity_on(open_interval(0, 1))
    with pytest.raises(ToleranceError):
        beta(f, f, tol, TruncationPlan(4, 4))


def test_beta_empty_against_total_identity():
    for space in (R, UNIT):
        total = identity_on(OpenSet(space, (space.whole,)))
        e = beta(empty_map(space), total, TOL)
        assert e.contains(1)
        assert e.lo > 1 - 2 * TOL


def test_beta_is_symmetric():
    f = identity_on(open_interval(0, 1))
    g = affine_on(open_interval(-1, 1), 2, 0)
    assert beta(f, g, TOL) == beta(g, f, TOL)


def test_beta_n_single_index():
    f = identity_on(open_interval(0, 1))
    g = affine_on(open_interval(0, 1), 1, Fraction(1, 8))
    e = beta_n(f, g, 2, TOL)
    assert e.contains(Fraction(1, 8))
    assert beta_n(f, f, 2, TOL).lo == 0


def test_d_gamma_between_empty_and_identity():
    total = identity_on(OpenSet(UNIT, (UNIT.whole,)))
    e = d_gamma(empty_map(UNIT), total, TOL)
    assert e.contains(2)
    assert e.width <= TOL


def test_d_gamma_requires_injective_maps():
    f = identity_on(open_interval(0, 1))
    with pytest.raises(InjectivityError):
        d_gamma(f, constant_on(open_interval(0, 1), 0), TOL)


def test_compact_open_membership():
    f = affine_on(open_interval(0, 1), 2, 0)
    k = closed_interval(Fraction(1, 4), HALF)
    assert in_compact_open(f, k, open_interval(0, Fraction(3, 2)))
    assert not in_compact_open(f, k, open_interval(0, 1))
    assert not in_compact_open(f, closed_interval(0, HALF), open_interval(-5, 5))
    assert in_compact_open(empty_map(), IntervalSet(R, ()), open_interval(0, 1))


def test_compact_open_inverse_membership():
    f = affine_on(open_interval(0, 1), 2, 0)
    assert in_compact_open_inv(f, closed_interval(1, Fraction(3, 2)), open_interval(0, 1))
    assert not in_compact_open_inv(f, closed_interval(1, Fraction(3, 2)), open_interval(0, Fraction(5, 8)))
    assert not in_compact_open_inv(f, closed_interval(1, 3), open_interval(0, 1))


def test_ball_membership():
    k = closed_interval(0, 1)
    identity = identity_on(WIDE)
    assert in_ball(shifted(Fraction(1, 4)), identity, k, HALF)
    assert not in_ball(shifted(HALF), identity, k, HALF)
    assert not in_ball(empty_map(), identity, k, HALF)
    assert not in_ball(identity_on(open_interval(0, 2)), identity, k, HALF)


def test_ball_preconditions():
    k = closed_interval(0, 1)
    identity = identity_on(WIDE)
    with pytest.raises(PreconditionError):
        in_ball(identity, empty_map(), k, HALF)
    with pytest.raises(PreconditionError):
        in_ball(identity, identity, k, 0)
    with pytest.raises(PreconditionError):
        in_ball(identity, identity_on(open_interval(0, 1)), k, HALF)


def test_separation_radius():
    identity = identity_on(WIDE)
    k = closed_interval(0, 1)
    assert separation_radius(identity, k, WIDE) == 1
    assert separation_radius(identity, k, open_interval(Fraction(-1, 4), Fraction(9, 8))) == Fraction(1, 8)
    double = affine_on(open_interval(0, 1), 2, 0)
    assert separation_radius(double, closed_interval(Fraction(1, 4), HALF), open_interval(0, 2)) == HALF
    with pytest.raises(PreconditionError):
        separation_radius(identity, k, open_interval(0, 1))


def test_separation_radius_gives_sound_ball():
    identity = identity_on(WIDE)
    k = closed_interval(0, 1)
    v = open_interval(Fraction(-1, 4), Fraction(9, 8))
    eps = separation_radius(identity, k, v)
    inside = shifted(eps / 2)
    assert in_ball(inside, identity, k, eps)
    assert in_compact_open(inside, k, v)


def test_empty_separation_witness():
    assert empty_separation_witness(identity_on(open_interval(0, 1))) == 2
    assert empty_separation_witness(identity_on(OpenSet(UNIT, (UNIT.whole,)))) == 1
    assert basis_element(2, R).is_subset(open_interval(0, 1))


def test_empty_separation_witness_errors():
    with pytest.raises(PreconditionError):
        empty_separation_witness(empty_map())
    with pytest.raises(SearchExhaustedError) as e:
        empty_separation_witness(identity_on(open_interval(10, 11)), bound=10)
    assert e.value.bound == 10


def test_domain_and_image_subbasis():
    f = identity_on(open_interval(0, 1))
    assert in_domain_hit(f, open_interval(Fraction(1, 2), 2))
    assert not in_domain_hit(f, open_interval(Fraction(1, 4), HALF))
    assert in_domain_miss(f, closed_interval(Fraction(1, 4), HALF))
    assert not in_domain_miss(f, closed_interval(HALF, 2))
    g = affine_on(open_interval(0, 1), 2, 0)
    assert in_image_hit(g, open_interval(Fraction(3, 2), 3))
    assert in_image_miss(g, closed_interval(HALF, Fraction(3, 2)))
    assert not in_image_miss(g, closed_interval(1, 3))


def test_countable_subbasis():
    f = identity_on(WIDE)
    # cl(U_2) = [0,1]; U_4 = (-1,1); U_516 = (-1,1) ∪ (0,2)
    assert not in_countable_subbasis(f, "compact_open", 2, 4)
    assert in_countable_subbasis(f, "compact_open", 2, 516)
    g = identity_on(open_interval(0, 1))
    assert in_countable_subbasis(g, "domain_hit", 1)
    assert not in_countable_subbasis(g, "domain_hit", 2)
    with pytest.raises(PreconditionError):
        in_countable_subbasis(g, "compact_open", 2)
    with pytest.raises(PreconditionError):
        in_countable_subbasis(g, "unknown", 1)


def test_refine_ball():
    f = identity_on(WIDE)
    balls = [
        (shifted(Fraction(1, 8)), closed_interval(0, 1), Fraction(1, 4)),
        (f, closed_interval(HALF, Fraction(3, 2)), HALF),
    ]
    k, delta = refine_ball(f, balls)
    assert k == closed_interval(0, Fraction(3, 2))
    assert delta == Fraction(1, 8)
    g = shifted(Fraction(1, 16))
    assert in_ball(g, f, k, delta)
    assert all(in_ball(g, center, ki, eps) for center, ki, eps in balls)


def test_refine_ball_rejects_outsider():
    f = identity_on(WIDE)
    with pytest.raises(PreconditionError):
        refine_ball(shifted(1), [(f, closed_interval(0, 1), HALF)])
