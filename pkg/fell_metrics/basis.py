"""
Алгебра конечных объединений рациональных интервалов, перечисление
счетной базы {U_n} объемлющего пространства и компактные исчерпания K_mn.
"""
import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Iterator, List, Optional, Tuple, Union

from .errors import AmbientMismatchError, PreconditionError, RepresentationError

Rational = Fraction
Endpoint = Union[Fraction, float]

INF = math.inf


def is_infinite(x: Endpoint) -> bool:
    return isinstance(x, float) and math.isinf(x)


def _as_endpoint(x) -> Endpoint:
    if is_infinite(x):
        return x
    if isinstance(x, float):
        raise RepresentationError(f"Концы интервалов должны быть рациональными, получено {x!r}")
    return Fraction(x)


@dataclass(frozen=True)
class Interval:
    """
    Интервал с рациональными концами (или ±inf) и флагами открытости.
    Бесконечный конец всегда открыт.
    """
    lo: Endpoint
    hi: Endpoint
    lo_open: bool = True
    hi_open: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_endpoint(self.lo))
        object.__setattr__(self, "hi", _as_endpoint(self.hi))
        if self.lo == INF or self.hi == -INF:
            raise RepresentationError(f"Некорректные концы интервала: {self.lo}, {self.hi}")
        if (is_infinite(self.lo) and not self.lo_open) or (is_infinite(self.hi) and not self.hi_open):
            raise RepresentationError("Бесконечный конец интервала не может быть замкнутым")

    @property
    def is_empty(self) -> bool:
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and (self.lo_open or self.hi_open)

    @property
    def is_bounded(self) -> bool:
        return not is_infinite(self.lo) and not is_infinite(self.hi)

    @property
    def length(self) -> Endpoint:
        if not self.is_bounded:
            return INF
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        lo_ok = self.lo < x or (self.lo == x and not self.lo_open)
        hi_ok = x < self.hi or (x == self.hi and not self.hi_open)
        return lo_ok and hi_ok

    def contains_interval(self, other: "Interval") -> bool:
        """Содержит ли интервал непустой интервал other"""
        lo_ok = self.lo < other.lo or (self.lo == other.lo and (not self.lo_open or other.lo_open))
        hi_ok = other.hi < self.hi or (other.hi == self.hi and (not self.hi_open or other.hi_open))
        return lo_ok and hi_ok

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        if self.lo > other.lo:
            lo, lo_open = self.lo, self.lo_open
        elif self.lo < other.lo:
            lo, lo_open = other.lo, other.lo_open
        else:
            lo, lo_open = self.lo, self.lo_open or other.lo_open

        if self.hi < other.hi:
            hi, hi_open = self.hi, self.hi_open
        elif self.hi > other.hi:
            hi, hi_open = other.hi, other.hi_open
        else:
            hi, hi_open = self.hi, self.hi_open or other.hi_open

        return make_interval(lo, hi, lo_open, hi_open)

    def closure(self) -> "Interval":
        return Interval(self.lo, self.hi, is_infinite(self.lo), is_infinite(self.hi))

    def sample_point(self) -> Fraction:
        """Точка, заведомо лежащая в непустом интервале"""
        if not self.lo_open:
            return self.lo
        if not self.hi_open:
            return self.hi
        if self.is_bounded:
            return (self.lo + self.hi) / 2
        if not is_infinite(self.lo):
            return self.lo + 1
        if not is_infinite(self.hi):
            return self.hi - 1
        return Fraction(0)


def make_interval(lo: Endpoint, hi: Endpoint, lo_open: bool, hi_open: bool) -> Optional[Interval]:
    """Создает интервал или возвращает None, если он пуст"""
    if lo > hi:
        return None
    if lo == hi and (lo_open or hi_open or is_infinite(lo)):
        return None
    return Interval(lo, hi, lo_open or is_infinite(lo), hi_open or is_infinite(hi))


class AmbientSpace(Enum):
    """Объемлющее пространство X: вещественная прямая или отрезок [0,1]"""
    REALS = "reals"
    UNIT_INTERVAL = "unit_interval"

    @property
    def whole(self) -> Interval:
        if self is AmbientSpace.REALS:
            return Interval(-INF, INF, True, True)
        return Interval(Fraction(0), Fraction(1), False, False)

    def is_relatively_open(self, interval: Interval) -> bool:
        whole = self.whole
        if not whole.contains_interval(interval):
            return False
        lo_ok = interval.lo_open or (interval.lo == whole.lo and not whole.lo_open)
        hi_ok = interval.hi_open or (interval.hi == whole.hi and not whole.hi_open)
        return lo_ok and hi_ok


def _sort_key(interval: Interval):
    return interval.lo, interval.lo_open


def _merge(intervals: Iterable[Interval], space: AmbientSpace) -> Tuple[Interval, ...]:
    # Обрезаем по X и сортируем по левому концу
    whole = space.whole
    clipped = []
    for raw in intervals:
        piece = raw.intersect(whole)
        if piece is not None:
            clipped.append(piece)
    clipped.sort(key=_sort_key)

    # Сливаем пересекающиеся и касающиеся интервалы
    merged: List[Interval] = []
    for nxt in clipped:
        if merged:
            cur = merged[-1]
            touching = nxt.lo < cur.hi or (nxt.lo == cur.hi and not (cur.hi_open and nxt.lo_open))
            if touching:
                if nxt.hi > cur.hi:
                    hi, hi_open = nxt.hi, nxt.hi_open
                elif nxt.hi == cur.hi:
                    hi, hi_open = cur.hi, cur.hi_open and nxt.hi_open
                else:
                    hi, hi_open = cur.hi, cur.hi_open
                merged[-1] = Interval(cur.lo, hi, cur.lo_open, hi_open)
                continue
        merged.append(nxt)
    return tuple(merged)


@dataclass(frozen=True, eq=False)
class IntervalSet:
    """
    Конечное объединение интервалов в каноническом виде: компоненты
    попарно не пересекаются, отсортированы и максимальны.
    """
    space: AmbientSpace
    intervals: Tuple[Interval, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "intervals", _merge(self.intervals, self.space))

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.space is other.space and self.intervals == other.intervals

    def __hash__(self) -> int:
        return hash((self.space, self.intervals))

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __repr__(self) -> str:
        parts = ", ".join(format_interval(iv) for iv in self.intervals) or "∅"
        return f"{type(self).__name__}({self.space.value}: {parts})"

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_bounded(self) -> bool:
        return all(iv.is_bounded for iv in self.intervals)

    def contains(self, x: Fraction) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    def _check_space(self, other: "IntervalSet"):
        if self.space is not other.space:
            raise AmbientMismatchError(
                f"Множества лежат в разных пространствах: {self.space.value} и {other.space.value}"
            )

    def union(self, other: "IntervalSet") -> "IntervalSet":
        self._check_space(other)
        return IntervalSet(self.space, self.intervals + other.intervals)

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        self._check_space(other)
        pieces = []
        for a in self.intervals:
            for b in other.intervals:
                piece = a.intersect(b)
                if piece is not None:
                    pieces.append(piece)
        return IntervalSet(self.space, tuple(pieces))

    def complement(self) -> "IntervalSet":
        """Дополнение до объемлющего пространства"""
        whole = self.space.whole
        gaps = []
        start, start_open = whole.lo, whole.lo_open
        for iv in self.intervals:
            gap = make_interval(start, iv.lo, start_open, not iv.lo_open)
            if gap is not None:
                gaps.append(gap)
            start, start_open = iv.hi, not iv.hi_open
        gap = make_interval(start, whole.hi, start_open, whole.hi_open)
        if gap is not None:
            gaps.append(gap)
        return IntervalSet(self.space, tuple(gaps))

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersection(other.complement())

    def is_subset(self, other: "IntervalSet") -> bool:
        self._check_space(other)
        # компоненты other разделены, поэтому связный кусок лежит в одной из них
        return all(
            any(b.contains_interval(a) for b in other.intervals)
            for a in self.intervals
        )

    def intersects(self, other: "IntervalSet") -> bool:
        self._check_space(other)
        return any(
            a.intersect(b) is not None
            for a in self.intervals
            for b in other.intervals
        )

    def closure(self) -> "IntervalSet":
        return IntervalSet(self.space, tuple(iv.closure() for iv in self.intervals))

    def interior(self) -> "OpenSet":
        """Относительная внутренность: замкнутыми остаются только концы, совпадающие с концами X"""
        whole = self.space.whole
        pieces = []
        for iv in self.intervals:
            if iv.lo == iv.hi:
                continue
            lo_open = not (iv.lo == whole.lo and not whole.lo_open)
            hi_open = not (iv.hi == whole.hi and not whole.hi_open)
            pieces.append(Interval(iv.lo, iv.hi, lo_open, hi_open))
        return OpenSet(self.space, tuple(pieces))

    def distance(self, other: "IntervalSet") -> Endpoint:
        """inf |x - y| по x из self, y из other; для пустого множества inf"""
        self._check_space(other)
        best: Endpoint = INF
        for a in self.intervals:
            for b in other.intervals:
                if a.hi < b.lo:
                    gap = b.lo - a.hi
                elif b.hi < a.lo:
                    gap = a.lo - b.hi
                else:
                    return Fraction(0)
                best = min(best, gap)
        return best

    def is_open(self) -> bool:
        return all(self.space.is_relatively_open(iv) for iv in self.intervals)

    def is_compact(self) -> bool:
        return all(iv.is_bounded and not iv.lo_open and not iv.hi_open for iv in self.intervals)

    def sample_point(self) -> Fraction:
        if self.is_empty:
            raise PreconditionError("Пустое множество не содержит точек")
        return self.intervals[0].sample_point()

    def as_open(self) -> "OpenSet":
        return OpenSet(self.space, self.intervals)

    def as_compact(self) -> "CompactSet":
        return CompactSet(self.space, self.intervals)


@dataclass(frozen=True, eq=False, repr=False)
class OpenSet(IntervalSet):
    """Открытое (относительно X) множество"""

    def __post_init__(self):
        super().__post_init__()
        for iv in self.intervals:
            if not self.space.is_relatively_open(iv):
                raise RepresentationError(f"Интервал {format_interval(iv)} не открыт в {self.space.value}")


@dataclass(frozen=True, eq=False, repr=False)
class CompactSet(IntervalSet):
    """Компакт: конечное объединение замкнутых ограниченных интервалов"""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_compact():
            raise RepresentationError(f"Множество {self!r} не является компактом")


def format_interval(iv: Interval) -> str:
    left = "(" if iv.lo_open else "["
    right = ")" if iv.hi_open else "]"
    return f"{left}{iv.lo}, {iv.hi}{right}"


def open_interval(lo, hi, space: AmbientSpace = AmbientSpace.REALS) -> OpenSet:
    """(lo, hi) ∩ X"""
    return normalize_open([Interval(lo, hi, True, True)], space)


def closed_interval(lo, hi, space: AmbientSpace = AmbientSpace.REALS) -> CompactSet:
    return CompactSet(space, (Interval(lo, hi, False, False),))


# ---------------------------------------------------------------------------
# Перечисление рациональных чисел и базы
# ---------------------------------------------------------------------------

class _RationalSequence:
    """
    Несократимые p/q, q >= 1, упорядоченные по |p| + q, затем по p.
    Последовательность начинается с 0, -1, 1, -2, -1/2, 1/2, 2, ...
    """

    def __init__(self):
        self._items: List[Fraction] = []
        self._height = 0
        self._lock = threading.Lock()

    def _grow(self):
        self._height += 1
        s = self._height
        shell = []
        for q in range(1, s + 1):
            a = s - q
            for p in ((-a, a) if a else (0,)):
                if gcd(abs(p), q) == 1:
                    shell.append((p, q))
        shell.sort()
        self._items.extend(Fraction(p, q) for p, q in shell)

    def __getitem__(self, i: int) -> Fraction:
        with self._lock:
            while len(self._items) < i:
                self._grow()
            return self._items[i - 1]


_RATIONALS = _RationalSequence()


def enumerate_rational(i: int) -> Fraction:
    """
    i-е рациональное число в зафиксированном порядке

    Args:
        i: Номер, начиная с 1

    Returns:
        Рациональное число
    """
    if i < 1:
        raise PreconditionError(f"Номер рационального числа должен быть >= 1, получено {i}")
    return _RATIONALS[i]


def _candidate_stream(space: AmbientSpace) -> Iterator[Interval]:
    # диагональный обход пар (i, j): по i + j, затем по i
    whole = space.whole
    s = 2
    while True:
        for i in range(1, s):
            a, b = enumerate_rational(i), enumerate_rational(s - i)
            if a < b:
                piece = Interval(a, b, True, True).intersect(whole)
                if piece is not None:
                    yield piece
        s += 1


class _CandidateIntervals:
    def __init__(self, space: AmbientSpace):
        self._stream = _candidate_stream(space)
        self._items: List[Interval] = []
        self._lock = threading.Lock()

    def __getitem__(self, k: int) -> Interval:
        with self._lock:
            while len(self._items) < k:
                self._items.append(next(self._stream))
            return self._items[k - 1]


_CANDIDATES = {space: _CandidateIntervals(space) for space in AmbientSpace}


def candidate_interval(k: int, space: AmbientSpace) -> Interval:
    """k-й непустой интервал (a, b) ∩ X в диагональном порядке"""
    if k < 1:
        raise PreconditionError(f"Номер интервала должен быть >= 1, получено {k}")
    return _CANDIDATES[space][k]


def basis_bits(n: int) -> List[int]:
    """Позиции единичных битов n (с 1)"""
    return [k for k in range(1, n.bit_length() + 1) if (n >> (k - 1)) & 1]


@lru_cache(maxsize=None)
def basis_element(n: int, space: AmbientSpace = AmbientSpace.REALS) -> OpenSet:
    """
    Элемент базы U_n: объединение кандидатов I_k по битам двоичной записи n

    Args:
        n: Индекс базы (n >= 1; U_0 = ∅ не перечисляется)
        space: Объемлющее пространство

    Returns:
        Непустое относительно открытое множество с компактным замыканием
    """
    if n < 1:
        raise PreconditionError(f"Индекс базы должен быть >= 1, получено {n}")
    return normalize_open([candidate_interval(k, space) for k in basis_bits(n)], space)


@lru_cache(maxsize=None)
def compact_exhaustion(m: int, n: int, space: AmbientSpace = AmbientSpace.REALS) -> CompactSet:
    """
    Компакт K_mn: каждая компонента U_n длины L сжимается на L/(2(m+1))
    с каждого открытого конца; концы, совпадающие с границей X, остаются на месте.
    """
    if m < 1:
        raise PreconditionError(f"Уровень исчерпания должен быть >= 1, получено {m}")
    pieces = []
    for component in basis_element(n, space):
        margin = component.length / (2 * (m + 1))
        lo = component.lo + margin if component.lo_open else component.lo
        hi = component.hi - margin if component.hi_open else component.hi
        pieces.append(Interval(lo, hi, False, False))
    return CompactSet(space, tuple(pieces))


@lru_cache(maxsize=None)
def exhaustion_interior(m: int, n: int, space: AmbientSpace = AmbientSpace.REALS) -> OpenSet:
    """int(K_mn)"""
    return compact_exhaustion(m, n, space).interior()


def normalize_open(raw: Iterable[Interval], space: AmbientSpace = AmbientSpace.REALS) -> OpenSet:
    """Канонический вид объединения открытых интервалов (идемпотентно)"""
    return OpenSet(space, tuple(raw))


# ---------------------------------------------------------------------------
# Предикаты
# ---------------------------------------------------------------------------

def subset(a: IntervalSet, b: IntervalSet) -> bool:
    return a.is_subset(b)


def intersects(a: IntervalSet, b: IntervalSet) -> bool:
    return a.intersects(b)


def interior(k: IntervalSet) -> OpenSet:
    return k.interior()


def closure(u: IntervalSet) -> IntervalSet:
    return u.closure()


def distance(k: IntervalSet, s: IntervalSet) -> Endpoint:
    return k.distance(s)
