"""
Гиперпространство CL(X) замкнутых множеств: подбаза hit-and-miss
топологии Фелла и метрика d_Fell.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .basis import AmbientSpace, IntervalSet, OpenSet, exhaustion_interior
from .enclosure import Enclosure, TruncationPlan, check_tolerance, enclose_double_series
from .errors import AmbientMismatchError, PreconditionError, RepresentationError
from .partial_map import GammaMap, image

Signature = Dict[Tuple[int, int], bool]


@dataclass(frozen=True)
class ClosedSet:
    """Замкнутое множество X ∖ complement; ∅ и X допустимы"""
    space: AmbientSpace
    complement: OpenSet

    def __post_init__(self):
        if self.complement.space is not self.space:
            raise AmbientMismatchError("Дополнение лежит в другом пространстве")

    @classmethod
    def empty(cls, space: AmbientSpace = AmbientSpace.REALS) -> "ClosedSet":
        return cls(space, OpenSet(space, (space.whole,)))

    @classmethod
    def whole(cls, space: AmbientSpace = AmbientSpace.REALS) -> "ClosedSet":
        return cls(space, OpenSet(space, ()))

    @property
    def is_empty(self) -> bool:
        return self.complement.intervals == (self.space.whole,)

    def __repr__(self) -> str:
        return f"ClosedSet({self.space.value}: X ∖ {self.complement!r})"


def _check_space(a: ClosedSet, s: IntervalSet):
    if a.space is not s.space:
        raise AmbientMismatchError(
            f"Множества лежат в разных пространствах: {a.space.value} и {s.space.value}"
        )


def complement_of_domain(f) -> ClosedSet:
    """D(f) = X ∖ dom(f)"""
    f = f.base if isinstance(f, GammaMap) else f
    return ClosedSet(f.space, f.domain)


def complement_of_image(f) -> ClosedSet:
    """
    I(f) = X ∖ im(f)

    Raises:
        RepresentationError: образ не открыт
    """
    f = f.base if isinstance(f, GammaMap) else f
    im = image(f)
    if not im.is_open():
        raise RepresentationError(f"Образ {im!r} не открыт, I(f) не определено")
    return ClosedSet(f.codomain, im.as_open())


def fell_miss(a: ClosedSet, k: IntervalSet) -> bool:
    """A ∈ (X∖K)⁺, т.е. A ∩ K = ∅"""
    _check_space(a, k)
    return k.is_subset(a.complement)


def fell_hit(a: ClosedSet, v: IntervalSet) -> bool:
    """
    A ∈ V⁻, т.е. A ∩ V ≠ ∅

    Raises:
        PreconditionError: V пусто
    """
    _check_space(a, v)
    if v.is_empty:
        raise PreconditionError("Множество V в V⁻ должно быть непустым")
    return not v.is_subset(a.complement)


def hits_exhaustion(a: ClosedSet, m: int, n: int) -> bool:
    """Пересекает ли A внутренность K_{(m+1)n}"""
    inner = exhaustion_interior(m + 1, n, a.space)
    return not inner.is_subset(a.complement)


def fell_summand(a: ClosedSet, b: ClosedSet, m: int, n: int) -> int:
    """t_mn: 0, если A и B одновременно пересекают или не пересекают int(K_{(m+1)n}), иначе 1"""
    return int(hits_exhaustion(a, m, n) != hits_exhaustion(b, m, n))


def d_fell(a: ClosedSet, b: ClosedSet, tol, plan: Optional[TruncationPlan] = None) -> Enclosure:
    """
    Оценка d_Fell(A, B) = Σ_n Σ_m 2^{-(m+n)} t_mn

    Args:
        a: Первое замкнутое множество
        b: Второе замкнутое множество
        tol: Требуемая ширина оценки
        plan: Явный план усечения (по умолчанию N = M по tol)

    Returns:
        Enclosure шириной не больше tol
    """
    if a.space is not b.space:
        raise AmbientMismatchError("Замкнутые множества лежат в разных пространствах")
    if tol is not None:
        check_tolerance(tol)
    # Суммируем t_mn по сетке плана
    plan = plan or TruncationPlan.for_tolerance(tol)
    return enclose_double_series(lambda m, n: Fraction(fell_summand(a, b, m, n)), plan)


def fell_signature(a: ClosedSet, cutoff: int) -> Signature:
    """Пересечения A с int(K_{(m+1)n}) по сетке m + n <= cutoff"""
    return {
        (m, n): hits_exhaustion(a, m, n)
        for n in range(1, cutoff)
        for m in range(1, cutoff - n + 1)
    }


def closed_from_signature(signature: Signature, space: AmbientSpace = AmbientSpace.REALS) -> ClosedSet:
    """
    Кандидат в замкнутое множество по сигнатуре: X минус объединение
    внутренностей, которые множество не пересекает
    """
    missed = [
        iv
        for (m, n), hit in sorted(signature.items())
        if not hit
        for iv in exhaustion_interior(m + 1, n, space)
    ]
    return ClosedSet(space, OpenSet(space, tuple(missed)))
