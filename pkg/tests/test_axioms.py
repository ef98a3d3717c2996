from fractions import Fraction

from fell_metrics.axioms import (
    COVERAGE_BOUND,
    beta_axioms,
    beta_mn_triangle,
    counterexample_reproduction,
    coverage_level,
    d_gamma_axioms,
    exhaustion_coverage,
    exhaustion_nesting,
    fell_dominance,
    fell_separation_scan,
    hyperspace_identity,
    oracle_sum,
    run_suites,
    sample_gamma_triples,
)
from fell_metrics.basis import AmbientSpace, OpenSet, basis_element, compact_exhaustion, open_interval
from fell_metrics.enclosure import TruncationPlan
from fell_metrics.hyperspace import ClosedSet
from fell_metrics.metric import beta, beta_mn, in_l
from fell_metrics.partial_map import affine_on, empty_map, identity_on
from fell_metrics.sampling import make_rng

R = AmbientSpace.REALS


def mixed_case_is_zero(f, g, m, n):
    """β_mn с ошибкой: смешанный случай дает 0 вместо 1"""
    if in_l(f, m, n) != in_l(g, m, n):
        return Fraction(0)
    return beta_mn(f, g, m, n)


def far_apart_triple():
    whole = OpenSet(R, (R.whole,))
    f = identity_on(whole)
    g = affine_on(whole, 1, 1)
    return f, g, empty_map(R)


def test_triangle_holds_for_real_beta_mn():
    assert beta_mn_triangle([far_apart_triple()]).passed


def test_triangle_catches_corrupted_beta_mn():
    result = beta_mn_triangle([far_apart_triple()], beta_mn_fn=mixed_case_is_zero)
    assert not result.passed
    assert result.witnesses[0]["lhs"] == 1
    assert result.witnesses[0]["rhs"] == 0


def test_beta_axioms_catch_corrupted_beta_mn():
    assert beta_axioms([far_apart_triple()]).passed
    assert not beta_axioms([far_apart_triple()], beta_mn_fn=mixed_case_is_zero).passed


def test_dominance_catches_corrupted_beta_mn():
    f = identity_on(open_interval(0, 1))
    g = empty_map(R)
    assert fell_dominance([(f, g)]).passed
    assert not fell_dominance([(f, g)], beta_mn_fn=mixed_case_is_zero).passed


def test_oracle_sum_matches_enclosure():
    f = identity_on(open_interval(0, 1))
    g = affine_on(open_interval(-1, 1), 2, 0)
    plan = TruncationPlan.for_tolerance(Fraction(1, 256))
    assert beta(f, g, None, plan).lo == oracle_sum(f, g, plan.n_cutoff, plan.m_cutoff)


def test_coverage_level_is_least():
    component = basis_element(2, R).intervals[0]
    for x in (Fraction(1, 2), Fraction(1, 10), Fraction(999, 1000), Fraction(1, 10 ** 6)):
        m = coverage_level(x, component)
        assert m <= COVERAGE_BOUND
        assert compact_exhaustion(m, 2, R).contains(x)
        if m > 1:
            assert not compact_exhaustion(m - 1, 2, R).contains(x)


def test_exhaustion_suites_pass():
    assert exhaustion_nesting(max_n=16, max_m=4).passed
    assert exhaustion_coverage(max_n=16, max_k=3).passed


def test_hyperspace_identity_on_fixed_sets():
    pairs = [
        (ClosedSet(R, open_interval(0, 1)), ClosedSet(R, open_interval(-1, 2))),
        (ClosedSet.empty(R), ClosedSet.whole(R)),
    ]
    assert hyperspace_identity(pairs, cutoff=8).passed


def test_counterexample_reproduction():
    result = counterexample_reproduction()
    assert result.passed
    assert result.total == 4


def test_run_suites_small_sample():
    lines = []
    results = run_suites(samples=4, seed=42, progress=lines.append)
    assert [r.name for r in results][0] == "exhaustion_nesting"
    assert all(r.passed for r in results), [r.witnesses for r in results if not r.passed]
    assert len(lines) == len(results)


def test_d_gamma_axioms_on_fixed_and_random_triples():
    whole = OpenSet(R, (R.whole,))
    fixed = (identity_on(whole), affine_on(whole, 2, 0), affine_on(open_interval(0, 1), 1, Fraction(1, 2)))
    result = d_gamma_axioms([fixed] + sample_gamma_triples(make_rng(42, 7), 3))
    assert result.passed, result.witnesses
    assert result.total == 4


def test_fell_separation_scan():
    a = ClosedSet(R, open_interval(0, 1))
    b = ClosedSet(R, open_interval(-1, 2))
    # отличие только на [1, 1 + 2^-40): концы int K_{(m+1)n} при m + n <= 16 его не различают
    close = ClosedSet(R, open_interval(0, 1 + Fraction(1, 2 ** 40)))
    result = fell_separation_scan([(a, b), (a, a), (a, close)])
    assert result.passed
    assert result.total == 1
    assert result.inconclusive == 1
