"""
Рациональные оценки [lo, hi] значений бесконечных рядов и план усечения
двойного ряда Σ_n Σ_m 2^{-(m+n)} t_mn с членами из [0, 1].
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import ToleranceError


@dataclass(frozen=True)
class Enclosure:
    """Отрезок [lo, hi], заведомо содержащий точное значение ряда"""
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"Нижняя граница {self.lo} больше верхней {self.hi}")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def __add__(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(self.lo + other.lo, self.hi + other.hi)


def check_tolerance(tol) -> Fraction:
    tol = Fraction(tol)
    if tol <= 0:
        raise ToleranceError(f"Точность должна быть положительной, получено {tol}")
    return tol


def least_cutoff(tol: Fraction) -> int:
    """Наименьшее N >= 1 с 2^{-N+1} <= tol"""
    n = 1
    while Fraction(1, 2 ** (n - 1)) > tol:
        n += 1
    return n


@dataclass(frozen=True)
class TruncationPlan:
    """Границы суммирования: n <= n_cutoff (индекс базы), m <= m_cutoff (уровень исчерпания)"""
    n_cutoff: int
    m_cutoff: int

    @property
    def tail(self) -> Fraction:
        return Fraction(1, 2 ** self.n_cutoff) + Fraction(1, 2 ** self.m_cutoff)

    @classmethod
    def for_tolerance(cls, tol, n_cutoff: Optional[int] = None,
                      m_cutoff: Optional[int] = None) -> "TruncationPlan":
        """
        План с хвостом не больше tol

        Args:
            tol: Требуемая ширина оценки
            n_cutoff: Явная граница по n (переопределяет расчетную)
            m_cutoff: Явная граница по m (переопределяет расчетную)

        Raises:
            ToleranceError: tol <= 0 или явные границы дают хвост больше tol
        """
        tol = check_tolerance(tol)
        default = least_cutoff(tol)
        plan = cls(n_cutoff or default, m_cutoff or default)
        if plan.n_cutoff < 1 or plan.m_cutoff < 1:
            raise ToleranceError("Границы усечения должны быть положительными")
        if plan.tail > tol:
            raise ToleranceError(
                f"Хвост 2^-{plan.n_cutoff} + 2^-{plan.m_cutoff} = {plan.tail} больше точности {tol}"
            )
        return plan


def partial_double_sum(term: Callable[[int, int], Fraction], n_cutoff: int, m_cutoff: int) -> Fraction:
    """Точная частичная сумма Σ_{n<=N} Σ_{m<=M} 2^{-(m+n)} term(m, n)"""
    total = Fraction(0)
    for n in range(1, n_cutoff + 1):
        row = Fraction(0)
        for m in range(1, m_cutoff + 1):
            value = term(m, n)
            if value:
                row += value / 2 ** m
        total += row / 2 ** n
    return total


def enclose_double_series(term: Callable[[int, int], Fraction], plan: TruncationPlan) -> Enclosure:
    lo = partial_double_sum(term, plan.n_cutoff, plan.m_cutoff)
    return Enclosure(lo, lo + plan.tail)


def enclose_series(term: Callable[[int], Fraction], tol) -> Enclosure:
    """Оценка Σ_m 2^{-m} term(m) с членами из [0, 1]; хвост 2^{-M} <= tol"""
    tol = check_tolerance(tol)
    m_cutoff = least_cutoff(tol * 2)
    lo = sum((Fraction(term(m)) / 2 ** m for m in range(1, m_cutoff + 1)), Fraction(0))
    return Enclosure(lo, lo + Fraction(1, 2 ** m_cutoff))
