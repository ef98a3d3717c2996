"""
Наборы проверок инвариантов: вложенность и покрытие исчерпаний, алгебра
частичных отображений, аксиомы псевдометрик β_mn и метрик β и d_γ, мажорирование
d_Fell, тождество для d_Fell через тождественные отображения, разделение
замкнутых множеств на сетке, связь τ_co и τ_cc,
воспроизведение контрпримера в Γ[0,1].
"""
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .basis import (
    AmbientSpace,
    basis_element,
    candidate_interval,
    compact_exhaustion,
    normalize_open,
)
from .convergence import counterexample_gamma
from .enclosure import TruncationPlan
from .errors import InjectivityError
from .hyperspace import complement_of_domain, d_fell, fell_summand
from .metric import beta, beta_mn, d_gamma, in_ball, in_compact_open, separation_radius
from .partial_map import (
    compose,
    constant_on,
    empty_map,
    identity_on,
    image,
    invert,
    join,
    restrict,
)
from .sampling import (
    make_rng,
    random_closed,
    random_compact_in,
    random_gamma,
    random_map,
    random_neighbourhood,
    random_perturbation,
    random_subdomain,
)

BetaMn = Callable[..., Fraction]
Progress = Optional[Callable[[str], None]]

SPACES = (AmbientSpace.REALS, AmbientSpace.UNIT_INTERVAL)
SUITE_TOLERANCE = Fraction(1, 2 ** 10)
COVERAGE_BOUND = 10 ** 7
MAX_WITNESSES = 5


@dataclass
class SuiteResult:
    """Итог одного набора: число проверок, нарушений и неокончательных случаев"""
    name: str
    total: int = 0
    failed: int = 0
    inconclusive: int = 0
    witnesses: List[dict] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def check(self, ok: bool, **witness):
        self.total += 1
        if not ok:
            self.failed += 1
            if len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness)


def _space(i: int) -> AmbientSpace:
    return SPACES[i % len(SPACES)]


def _grid(cutoff: int):
    for n in range(1, cutoff):
        for m in range(1, cutoff - n + 1):
            yield m, n


# ---------------------------------------------------------------------------
# basis
# ---------------------------------------------------------------------------

def exhaustion_nesting(max_n: int = 64, max_m: int = 16) -> SuiteResult:
    result = SuiteResult("exhaustion_nesting")
    for space in SPACES:
        for n in range(1, max_n + 1):
            for m in range(1, max_m + 1):
                inner = compact_exhaustion(m, n, space)
                outer = compact_exhaustion(m + 1, n, space).interior()
                result.check(inner.is_subset(outer), space=space, m=m, n=n)
    return result


def coverage_level(x: Fraction, component) -> int:
    """Наименьшее m >= 1 с x ∈ K_mn для точки x компоненты U_n"""
    need = 1
    length = component.length
    if component.lo_open:
        need = max(need, math.ceil(length / (2 * (x - component.lo))) - 1)
    if component.hi_open:
        need = max(need, math.ceil(length / (2 * (component.hi - x))) - 1)
    return max(need, 1)


def exhaustion_coverage(max_n: int = 64, max_k: int = 6) -> SuiteResult:
    result = SuiteResult("exhaustion_coverage")
    for space in SPACES:
        for n in range(1, max_n + 1):
            for component in basis_element(n, space):
                length = component.length
                points = [(component.lo + component.hi) / 2]
                for k in range(1, max_k + 1):
                    offset = length / 10 ** k
                    points += [component.lo + offset, component.hi - offset]
                for x in points:
                    m = coverage_level(x, component)
                    ok = m <= COVERAGE_BOUND and compact_exhaustion(m, n, space).contains(x)
                    result.check(ok, space=space, n=n, x=x, m=m)
    return result


def normalization(rng: np.random.Generator, samples: int) -> SuiteResult:
    result = SuiteResult("normalize_open")
    for i in range(samples):
        space = _space(i)
        raw = [candidate_interval(int(k), space) for k in rng.integers(1, 40, size=int(rng.integers(1, 6)))]
        normal = normalize_open(raw, space)
        shuffled = [raw[int(j)] for j in rng.permutation(len(raw))]
        result.check(normalize_open(shuffled, space) == normal
                     and normalize_open(normal.intervals, space) == normal,
                     raw=raw)
    return result


# ---------------------------------------------------------------------------
# partial_map
# ---------------------------------------------------------------------------

def gamma_inverse_laws(rng: np.random.Generator, samples: int) -> SuiteResult:
    result = SuiteResult("gamma_inverse_laws")
    for i in range(samples):
        f = random_gamma(rng, _space(i))
        g = invert(f).base
        result.check(compose(g, f) == identity_on(f.domain)
                     and image(g) == f.domain
                     and g.domain == image(f)
                     and invert(g).base == f,
                     f=f)
    return result


def composition_laws(rng: np.random.Generator, samples: int) -> SuiteResult:
    result = SuiteResult("composition_laws")
    for i in range(samples):
        space = _space(i)
        f, g, h = (random_map(rng, space) for _ in range(3))
        associative = compose(f, compose(g, h)) == compose(compose(f, g), h)
        twin = restrict(g, g.domain)
        congruent = compose(h, g) == compose(h, twin)
        result.check(associative and congruent, f=f, g=g, h=h)
    return result


def join_laws(rng: np.random.Generator, samples: int) -> SuiteResult:
    result = SuiteResult("join_laws")
    for i in range(samples):
        f = random_map(rng, _space(i))
        u, v = random_subdomain(rng, f), random_subdomain(rng, f)
        a, b = restrict(f, u), restrict(f, v)
        joined = join([a, b])
        result.check(joined == join([b, a])
                     and join([f, f]) == f
                     and joined == restrict(f, u.union(v)),
                     f=f, u=u, v=v)
    return result


# ---------------------------------------------------------------------------
# metric
# ---------------------------------------------------------------------------

def beta_mn_triangle(triples: Sequence[Tuple], cutoff: int = 12,
                     beta_mn_fn: BetaMn = beta_mn) -> SuiteResult:
    result = SuiteResult("beta_mn_triangle")
    for f, g, h in triples:
        for m, n in _grid(cutoff):
            fg, fh, hg = beta_mn_fn(f, g, m, n), beta_mn_fn(f, h, m, n), beta_mn_fn(h, g, m, n)
            result.check(fg <= fh + hg and fg == beta_mn_fn(g, f, m, n),
                         f=f, g=g, h=h, m=m, n=n, lhs=fg, rhs=fh + hg)
    return result


def oracle_sum(f, g, n_cutoff: int, m_cutoff: int, beta_mn_fn: BetaMn = beta_mn) -> Fraction:
    """Прямая двойная сумма без машинерии оценок"""
    total = Fraction(0)
    for n in range(1, n_cutoff + 1):
        for m in range(1, m_cutoff + 1):
            total += Fraction(1, 2 ** (m + n)) * beta_mn_fn(f, g, m, n)
    return total


def _beta_enclosure(f, g, plan: TruncationPlan, beta_mn_fn: BetaMn):
    if beta_mn_fn is beta_mn:
        return beta(f, g, None, plan)
    lo = oracle_sum(f, g, plan.n_cutoff, plan.m_cutoff, beta_mn_fn)
    return lo, lo + plan.tail


def _lo_hi(e):
    return (e.lo, e.hi) if hasattr(e, "lo") else e


def beta_axioms(triples: Sequence[Tuple], tol: Fraction = SUITE_TOLERANCE,
                beta_mn_fn: BetaMn = beta_mn) -> SuiteResult:
    """Симметрия, lo = 0 для равных, неравенство треугольника через оценки"""
    result = SuiteResult("beta_axioms")
    plan = TruncationPlan.for_tolerance(tol)
    for f, g, h in triples:
        fg = _lo_hi(_beta_enclosure(f, g, plan, beta_mn_fn))
        gf = _lo_hi(_beta_enclosure(g, f, plan, beta_mn_fn))
        fh = _lo_hi(_beta_enclosure(f, h, plan, beta_mn_fn))
        hg = _lo_hi(_beta_enclosure(h, g, plan, beta_mn_fn))
        ff = _lo_hi(_beta_enclosure(f, f, plan, beta_mn_fn))
        result.check(fg == gf and ff[0] == 0 and fg[0] <= fh[1] + hg[1],
                     f=f, g=g, h=h, fg=fg, fh=fh, hg=hg)
    return result


def d_gamma_axioms(triples: Sequence[Tuple], tol: Fraction = SUITE_TOLERANCE) -> SuiteResult:
    """Симметрия, lo = 0 для равных и неравенство треугольника для d_γ через оценки"""
    result = SuiteResult("d_gamma_axioms")
    for f, g, h in triples:
        fg, gf = d_gamma(f, g, tol), d_gamma(g, f, tol)
        fh, hg = d_gamma(f, h, tol), d_gamma(h, g, tol)
        ff = d_gamma(f, f, tol)
        result.check(fg == gf and ff.lo == 0 and fg.lo <= fh.hi + hg.hi,
                     f=f, g=g, h=h, fg=fg, fh=fh, hg=hg)
    return result


def oracle_equivalence(pairs: Sequence[Tuple], tolerances=(Fraction(1, 2 ** 8), Fraction(1, 2 ** 12))) -> SuiteResult:
    result = SuiteResult("oracle_equivalence")
    for f, g in pairs:
        for tol in tolerances:
            plan = TruncationPlan.for_tolerance(tol)
            enclosure = beta(f, g, tol)
            value = oracle_sum(f, g, plan.n_cutoff, plan.m_cutoff)
            result.check(enclosure.contains(value) and enclosure.width <= tol,
                         f=f, g=g, tol=tol, enclosure=enclosure, oracle=value)
    return result


def separation_scan(pairs: Sequence[Tuple], cutoff: int = 16) -> SuiteResult:
    """Для различных f, g ищется (m, n) с β_mn > 0; исчерпание сетки дает неокончательный исход"""
    result = SuiteResult("separation_scan")
    for f, g in pairs:
        if f == g:
            continue
        if any(beta_mn(f, g, m, n) > 0 for m, n in _grid(cutoff)):
            result.check(True)
        else:
            result.inconclusive += 1
    return result


def fell_dominance(pairs: Sequence[Tuple], cutoff: int = 16, beta_mn_fn: BetaMn = beta_mn) -> SuiteResult:
    result = SuiteResult("fell_dominance")
    for f, g in pairs:
        a, b = complement_of_domain(f), complement_of_domain(g)
        for m, n in _grid(cutoff):
            t, value = fell_summand(a, b, m, n), beta_mn_fn(f, g, m, n)
            result.check(t <= value, f=f, g=g, m=m, n=n, t=t, beta=value)
    return result


def hyperspace_identity(closed_pairs: Sequence[Tuple], cutoff: int = 16) -> SuiteResult:
    """t_mn(A, B) = β_mn(Id_{X∖A}, Id_{X∖B}) почленно"""
    result = SuiteResult("hyperspace_identity")
    for a, b in closed_pairs:
        ia, ib = identity_on(a.complement), identity_on(b.complement)
        for m, n in _grid(cutoff):
            result.check(fell_summand(a, b, m, n) == beta_mn(ia, ib, m, n), a=a, b=b, m=m, n=n)
    return result


def fell_symmetry(closed_pairs: Sequence[Tuple], tol: Fraction = SUITE_TOLERANCE) -> SuiteResult:
    result = SuiteResult("fell_symmetry")
    for a, b in closed_pairs:
        result.check(d_fell(a, b, tol) == d_fell(b, a, tol), a=a, b=b)
    return result


def fell_separation_scan(closed_pairs: Sequence[Tuple], cutoff: int = 16) -> SuiteResult:
    """Для различных A, B ищется (m, n) с t_mn = 1; исчерпание сетки дает неокончательный исход"""
    result = SuiteResult("fell_separation_scan")
    for a, b in closed_pairs:
        if a == b:
            continue
        if any(fell_summand(a, b, m, n) for m, n in _grid(cutoff)):
            result.check(True)
        else:
            result.inconclusive += 1
    return result


def ball_soundness(rng: np.random.Generator, samples: int, members: int = 50) -> SuiteResult:
    """B_K(f, ε) ⊆ ⟨K,V⟩ при ε = separation_radius(f, K, V)"""
    result = SuiteResult("ball_soundness")
    for i in range(samples):
        f = random_map(rng, _space(i))
        if f.is_empty:
            continue
        k = random_compact_in(rng, f.domain)
        v = random_neighbourhood(rng, f, k)
        eps = separation_radius(f, k, v)
        result.check(eps > 0, f=f, k=k, v=v)
        for _ in range(members):
            g = random_perturbation(rng, f, eps)
            if in_ball(g, f, k, eps):
                result.check(in_compact_open(g, k, v), f=f, g=g, k=k, v=v, eps=eps)
    return result


# ---------------------------------------------------------------------------
# convergence
# ---------------------------------------------------------------------------

def counterexample_reproduction(tol: Fraction = Fraction(1, 2 ** 12)) -> SuiteResult:
    result = SuiteResult("counterexample")
    space = AmbientSpace.UNIT_INTERVAL
    empty = empty_map(space)
    his = [beta(counterexample_gamma(n), empty, tol).hi for n in (1, 2, 4, 8, 16, 32)]
    result.check(all(b <= a for a, b in zip(his, his[1:])), his=his)
    result.check(his[-1] < his[0] / 4, his=his)

    inverse = invert(counterexample_gamma(64))
    zero = constant_on(inverse.domain, 0)
    result.check(beta(inverse, zero, tol).hi < Fraction(1, 32))
    try:
        invert(zero)
        result.check(False, reason="invert(zero map) did not raise")
    except InjectivityError:
        result.check(True)
    return result


# ---------------------------------------------------------------------------
# Запуск
# ---------------------------------------------------------------------------

def sample_triples(rng: np.random.Generator, samples: int) -> List[Tuple]:
    return [tuple(random_map(rng, _space(i)) for _ in range(3)) for i in range(samples)]


def sample_gamma_triples(rng: np.random.Generator, samples: int) -> List[Tuple]:
    return [tuple(random_gamma(rng, _space(i)) for _ in range(3)) for i in range(samples)]


def run_suites(samples: int, seed: int, tol: Fraction = SUITE_TOLERANCE,
               beta_mn_fn: BetaMn = beta_mn, progress: Progress = None) -> List[SuiteResult]:
    """
    Запускает все наборы проверок

    Args:
        samples: Число случайных образцов на набор
        seed: Зерно (каждый набор получает свой поток)
        tol: Точность для проверок β и d_Fell
        beta_mn_fn: Реализация β_mn (подменяется в тестах для внедрения ошибок)
        progress: Функция для строк прогресса

    Returns:
        Список SuiteResult в фиксированном порядке
    """
    triples = sample_triples(make_rng(seed, 0), samples)
    pairs = [(f, g) for f, g, _ in triples]
    closed_rng = make_rng(seed, 1)
    closed_pairs = [(random_closed(closed_rng, _space(i)), random_closed(closed_rng, _space(i)))
                    for i in range(samples)]

    jobs = [
        lambda: exhaustion_nesting(),
        lambda: exhaustion_coverage(),
        lambda: normalization(make_rng(seed, 2), samples),
        lambda: gamma_inverse_laws(make_rng(seed, 3), samples),
        lambda: composition_laws(make_rng(seed, 4), samples),
        lambda: join_laws(make_rng(seed, 5), samples),
        lambda: beta_mn_triangle(triples, beta_mn_fn=beta_mn_fn),
        lambda: beta_axioms(triples, tol, beta_mn_fn=beta_mn_fn),
        lambda: d_gamma_axioms(sample_gamma_triples(make_rng(seed, 7), max(1, samples // 10)), tol),
        lambda: oracle_equivalence(pairs[:max(1, samples // 10)]),
        lambda: separation_scan(pairs),
        lambda: fell_dominance(pairs, beta_mn_fn=beta_mn_fn),
        lambda: hyperspace_identity(closed_pairs),
        lambda: fell_symmetry(closed_pairs, tol),
        lambda: fell_separation_scan(closed_pairs),
        lambda: ball_soundness(make_rng(seed, 6), samples),
        lambda: counterexample_reproduction(),
    ]
    results = []
    for job in jobs:
        started = time.perf_counter()
        res = job()
        res.seconds = time.perf_counter() - started
        if progress:
            mark = "✅" if res.passed else "❌"
            progress(f"{mark} {res.name}: {res.total - res.failed}/{res.total}"
                     + (f", неокончательно {res.inconclusive}" if res.inconclusive else ""))
        results.append(res)
    return results
