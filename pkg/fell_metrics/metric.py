"""
Метрики на частичных отображениях: d_K, псевдометрики β_mn, метрика β,
метрика d_γ на Γ(X), а также принадлежность подбазисным открытым множествам.
"""
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .basis import (
    CompactSet,
    IntervalSet,
    basis_element,
    compact_exhaustion,
    exhaustion_interior,
)
from .config import DEFAULT_SEARCH_BOUND
from .enclosure import (
    Enclosure,
    TruncationPlan,
    check_tolerance,
    enclose_series,
    partial_double_sum,
)
from .errors import AmbientMismatchError, DomainError, PreconditionError, SearchExhaustedError
from .hyperspace import complement_of_domain, complement_of_image, fell_hit, fell_miss
from .partial_map import (
    GammaMap,
    PartialMap,
    as_gamma,
    image,
    image_of_compact,
    preimage,
    uncovered_point,
)

__all__ = [
    "Enclosure",
    "TruncationPlan",
    "sup_distance",
    "beta_mn",
    "beta_n",
    "beta",
    "beta_partial_sum",
    "d_gamma",
    "in_compact_open",
    "in_compact_open_inv",
    "in_ball",
    "separation_radius",
    "empty_separation_witness",
    "in_domain_hit",
    "in_domain_miss",
    "in_image_hit",
    "in_image_miss",
    "in_countable_subbasis",
    "refine_ball",
]

ONE = Fraction(1)


def _partial(f) -> PartialMap:
    return f.base if isinstance(f, GammaMap) else f


def _check_pair(f: PartialMap, g: PartialMap):
    if f.space is not g.space or f.codomain is not g.codomain:
        raise AmbientMismatchError("Отображения действуют между разными пространствами")


def sup_distance(f, g, k: IntervalSet) -> Fraction:
    """
    d_K(f, g) = sup_{x∈K} min(|f(x) - g(x)|, 1)

    Разность линейна между соседними узлами f и g, поэтому супремум
    достигается в концах K или в узлах внутри K.

    Raises:
        PreconditionError: K пусто
        DomainError: K не лежит в dom(f) ∩ dom(g)
    """
    f, g = _partial(f), _partial(g)
    _check_pair(f, g)
    if k.is_empty:
        raise PreconditionError("Компакт K должен быть непустым")
    for h in (f, g):
        point = uncovered_point(k, h.domain)
        if point is not None:
            raise DomainError(f"Компакт не лежит в области определения: точка {point}", point=point)

    # Перебираем концы K и узлы внутри K
    best = Fraction(0)
    for iv in k:
        f_piece, g_piece = f.piece_covering(iv), g.piece_covering(iv)
        xs = {iv.lo, iv.hi}
        xs.update(x for p in (f_piece, g_piece) for x in p.xs if iv.lo < x < iv.hi)
        for x in xs:
            best = max(best, abs(f_piece.value_at(x) - g_piece.value_at(x)))
            if best >= ONE:
                return ONE
    return best


def in_l(f: PartialMap, m: int, n: int) -> bool:
    """f ∈ L_mn: D(f) пересекает int(K_{(m+1)n})"""
    return not exhaustion_interior(m + 1, n, f.space).is_subset(f.domain)


def beta_mn(f, g, m: int, n: int) -> Fraction:
    """
    Псевдометрика β_mn:
    0, если f и g обе из L_mn; d_{K_mn}(f, g), если обе не из L_mn; иначе 1
    """
    f, g = _partial(f), _partial(g)
    _check_pair(f, g)
    if m < 1 or n < 1:
        raise PreconditionError(f"Индексы m, n должны быть >= 1, получено {m}, {n}")
    f_in, g_in = in_l(f, m, n), in_l(g, m, n)
    if f_in and g_in:
        return Fraction(0)
    if not f_in and not g_in:
        return sup_distance(f, g, compact_exhaustion(m, n, f.space))
    return ONE


def beta_n(f, g, n: int, tol) -> Enclosure:
    """β_n(f, g) = Σ_m 2^{-m} β_mn(f, g) с хвостом не больше tol"""
    return enclose_series(lambda m: beta_mn(f, g, m, n), tol)


def beta_partial_sum(f, g, n_cutoff: int, m_cutoff: int) -> Fraction:
    """Точная частичная сумма ряда β по n <= n_cutoff, m <= m_cutoff"""
    f, g = _partial(f), _partial(g)
    if f == g:
        return Fraction(0)
    return partial_double_sum(lambda m, n: beta_mn(f, g, m, n), n_cutoff, m_cutoff)


def beta(f, g, tol, plan: Optional[TruncationPlan] = None) -> Enclosure:
    """
    Оценка метрики β(f, g) = Σ_n Σ_m 2^{-(m+n)} β_mn(f, g)

    Args:
        f: Первое отображение
        g: Второе отображение
        tol: Требуемая ширина оценки
        plan: Явный план усечения

    Returns:
        Enclosure: lo точная частичная сумма, hi = lo + хвост
    """
    f, g = _partial(f), _partial(g)
    _check_pair(f, g)
    # tol проверяется и при явном плане
    if tol is not None:
        check_tolerance(tol)
    # Точная частичная сумма плюс хвост
    plan = plan or TruncationPlan.for_tolerance(tol)
    lo = beta_partial_sum(f, g, plan.n_cutoff, plan.m_cutoff)
    return Enclosure(lo, lo + plan.tail)


def d_gamma(f, g, tol, n_cutoff: Optional[int] = None, m_cutoff: Optional[int] = None) -> Enclosure:
    """
    d_γ(f, g) = β(f, g) + β(f⁻¹, g⁻¹); каждое слагаемое считается с точностью tol/2

    Raises:
        InjectivityError: одно из отображений не инъективно
    """
    tol = check_tolerance(tol)
    f, g = as_gamma(f), as_gamma(g)
    plan = TruncationPlan.for_tolerance(tol / 2, n_cutoff, m_cutoff)
    return beta(f, g, tol, plan) + beta(f.inverse, g.inverse, tol, plan)


# ---------------------------------------------------------------------------
# Подбазисные множества
# ---------------------------------------------------------------------------

def in_compact_open(f, k: IntervalSet, v: IntervalSet) -> bool:
    """f ∈ ⟨K,V⟩: K ⊆ dom(f) и f(K) ⊆ V; ⟨∅,V⟩ содержит все отображения"""
    f = _partial(f)
    if k.is_empty:
        return True
    if not k.is_subset(f.domain):
        return False
    return image_of_compact(f, k).is_subset(v)


def in_compact_open_inv(f, k: IntervalSet, v: IntervalSet) -> bool:
    """f ∈ ⟨K,V⟩⁻¹: K ⊆ im(f) и f⁻¹(K) ⊆ V"""
    f = _partial(f)
    if k.is_empty:
        return True
    if not k.is_subset(image(f)):
        return False
    return preimage(f, k).is_subset(v)


def in_ball(g, f, k: IntervalSet, eps) -> bool:
    """
    g ∈ B_K(f, ε): K ⊆ dom(g) и d_K(f, g) < ε

    Raises:
        PreconditionError: f = ∅, K пусто, K ⊄ dom(f) или ε <= 0
    """
    f, g = _partial(f), _partial(g)
    eps = Fraction(eps)
    if f.is_empty:
        raise PreconditionError("Центр шара не может быть пустым отображением")
    if k.is_empty:
        raise PreconditionError("Компакт K должен быть непустым")
    if not k.is_subset(f.domain):
        raise PreconditionError("Компакт K должен лежать в области определения центра шара")
    if eps <= 0:
        raise PreconditionError(f"Радиус должен быть положительным, получено {eps}")
    if not k.is_subset(g.domain):
        return False
    return sup_distance(f, g, k) < eps


def separation_radius(f, k: IntervalSet, v: IntervalSet) -> Fraction:
    """
    ε = min(1, dist(f(K), Y ∖ V)), при котором B_K(f, ε) ⊆ ⟨K,V⟩

    Raises:
        PreconditionError: K пусто или f ∉ ⟨K,V⟩
    """
    f = _partial(f)
    if k.is_empty:
        raise PreconditionError("Компакт K должен быть непустым")
    if not in_compact_open(f, k, v):
        raise PreconditionError("Отображение не лежит в ⟨K,V⟩")
    rest = v.complement()
    if rest.is_empty:
        return ONE
    return min(ONE, image_of_compact(f, k).distance(rest))


def empty_separation_witness(f, bound: int = DEFAULT_SEARCH_BOUND) -> int:
    """
    Наименьшее n <= bound с U_n ⊆ dom(f), т.е. f ∉ D⁻¹(U_n⁻)

    Raises:
        PreconditionError: f = ∅
        SearchExhaustedError: такого n не нашлось до bound (это не доказательство отсутствия)
    """
    f = _partial(f)
    if f.is_empty:
        raise PreconditionError("Пустое отображение лежит во всех D⁻¹(U⁻)")
    for n in range(1, bound + 1):
        if basis_element(n, f.space).is_subset(f.domain):
            return n
    raise SearchExhaustedError(f"Не найден U_n ⊆ dom(f) при n <= {bound}", bound=bound)


def in_domain_hit(f, v: IntervalSet) -> bool:
    """f ∈ D⁻¹(V⁻)"""
    return fell_hit(complement_of_domain(f), v)


def in_domain_miss(f, k: IntervalSet) -> bool:
    """f ∈ D⁻¹((X∖K)⁺), совпадает с ⟨K,Y⟩"""
    return fell_miss(complement_of_domain(f), k)


def in_image_hit(f, w: IntervalSet) -> bool:
    """f ∈ I⁻¹(W⁻)"""
    return fell_hit(complement_of_image(f), w)


def in_image_miss(f, k: IntervalSet) -> bool:
    """f ∈ I⁻¹((X∖K)⁺), совпадает с ⟨K,X⟩⁻¹"""
    return fell_miss(complement_of_image(f), k)


def in_countable_subbasis(f, kind: str, u: int, v: Optional[int] = None) -> bool:
    """
    Принадлежность элементу счетной подбазы топологии τ_{ι,D}

    Args:
        f: Отображение
        kind: "compact_open" для ⟨cl(U_u), U_v⟩, "domain_hit" для D⁻¹(U_u⁻)
        u: Индекс базы области определения
        v: Индекс базы пространства значений (для compact_open)
    """
    f = _partial(f)
    if kind == "compact_open":
        if v is None:
            raise PreconditionError("Для ⟨cl(U_u), U_v⟩ нужен индекс v")
        k = basis_element(u, f.space).closure().as_compact()
        return in_compact_open(f, k, basis_element(v, f.codomain))
    if kind == "domain_hit":
        return in_domain_hit(f, basis_element(u, f.space))
    raise PreconditionError(f"Неизвестный вид подбазисного множества: {kind!r}")


def refine_ball(f, balls: Sequence[Tuple[object, IntervalSet, Fraction]]) -> Tuple[CompactSet, Fraction]:
    """
    Для f ∈ ⋂ B_{K_i}(g_i, ε_i) возвращает (⋃K_i, δ) с B_{⋃K_i}(f, δ) ⊆ ⋂ B_{K_i}(g_i, ε_i)

    Args:
        f: Отображение из пересечения шаров
        balls: Тройки (центр g_i, компакт K_i, радиус ε_i)

    Raises:
        PreconditionError: список пуст или f не лежит в одном из шаров
    """
    f = _partial(f)
    if not balls:
        raise PreconditionError("Нужен хотя бы один шар")
    slacks: List[Fraction] = []
    parts = []
    for center, k, eps in balls:
        eps = Fraction(eps)
        if not in_ball(f, center, k, eps):
            raise PreconditionError("Отображение не лежит в одном из шаров")
        slacks.append(eps - sup_distance(f, center, k))
        parts.extend(k.intervals)
    return CompactSet(f.space, tuple(parts)), min(slacks)
