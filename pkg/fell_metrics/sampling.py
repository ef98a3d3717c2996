"""
Генераторы случайных объектов для проверок аксиом: области из базы,
кусочно-линейные отображения, частичные гомеоморфизмы, замкнутые множества.
Вся случайность идет через numpy.random.Generator с заданным зерном.
"""
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .basis import AmbientSpace, CompactSet, Interval, IntervalSet, OpenSet, basis_element
from .hyperspace import ClosedSet
from .partial_map import PartialMap, Piece, image_of_compact

MAX_BASIS_INDEX = 64
MAX_NODES = 8
MAX_DENOMINATOR = 64
VALUE_BOUND = 2


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Независимый поток для каждого набора проверок при одном зерне"""
    return np.random.default_rng([seed, stream])


def random_rational(rng: np.random.Generator, lo: Fraction, hi: Fraction,
                    denominator: int = MAX_DENOMINATOR) -> Fraction:
    """Рациональное число из [lo, hi] на сетке шага (hi - lo)/denominator"""
    j = int(rng.integers(0, denominator + 1))
    return lo + (hi - lo) * Fraction(j, denominator)


def random_domain(rng: np.random.Generator, space: AmbientSpace,
                  empty_rate: float = 0.1) -> OpenSet:
    """U_k при k <= 64, иногда ∅"""
    if rng.random() < empty_rate:
        return OpenSet(space, ())
    return basis_element(int(rng.integers(1, MAX_BASIS_INDEX + 1)), space)


def _interior_abscissae(rng: np.random.Generator, component: Interval, count: int) -> List[Fraction]:
    if count <= 0:
        return []
    steps = rng.choice(np.arange(1, MAX_DENOMINATOR), size=min(count, MAX_DENOMINATOR - 1), replace=False)
    length = component.hi - component.lo
    return sorted(component.lo + length * Fraction(int(j), MAX_DENOMINATOR) for j in steps)


def _value_range(codomain: AmbientSpace) -> Tuple[Fraction, Fraction]:
    if codomain is AmbientSpace.UNIT_INTERVAL:
        return Fraction(0), Fraction(1)
    return Fraction(-VALUE_BOUND), Fraction(VALUE_BOUND)


def random_map(rng: np.random.Generator, space: AmbientSpace,
               codomain: Optional[AmbientSpace] = None,
               domain: Optional[OpenSet] = None) -> PartialMap:
    """
    Случайное кусочно-линейное отображение

    Args:
        rng: Генератор случайных чисел
        space: Пространство области определения
        codomain: Пространство значений (по умолчанию space)
        domain: Область (по умолчанию случайный элемент базы)

    Returns:
        PartialMap с не более чем 8 узлами на компоненту
    """
    codomain = codomain or space
    domain = random_domain(rng, space) if domain is None else domain
    lo, hi = _value_range(codomain)
    pieces = []
    for component in domain:
        inner = _interior_abscissae(rng, component, int(rng.integers(0, MAX_NODES - 1)))
        xs = [component.lo] + inner + [component.hi]
        nodes = tuple((x, random_rational(rng, lo, hi)) for x in xs)
        pieces.append(Piece(component, nodes))
    return PartialMap(space, codomain, tuple(pieces))


def random_gamma(rng: np.random.Generator, space: AmbientSpace) -> PartialMap:
    """
    Строго монотонное отображение на одной компоненте случайного U_k.
    Замкнутый конец X переходит в 0 или 1, поэтому образ открыт в X.
    """
    component = basis_element(int(rng.integers(1, MAX_BASIS_INDEX + 1)), space).intervals[0]
    inner = _interior_abscissae(rng, component, int(rng.integers(0, MAX_NODES - 1)))
    xs = [component.lo] + inner + [component.hi]
    count = len(xs)

    if space is AmbientSpace.UNIT_INTERVAL:
        fixed_first, fixed_last = not component.lo_open, not component.hi_open
        first = 1 if fixed_first else 0
        last = MAX_DENOMINATOR - 1 if fixed_last else MAX_DENOMINATOR
        free = count - int(fixed_first) - int(fixed_last)
        picked = sorted(int(j) for j in rng.choice(np.arange(first, last + 1), size=free, replace=False))
        numerators = ([0] if fixed_first else []) + picked + ([MAX_DENOMINATOR] if fixed_last else [])
        values = [Fraction(j, MAX_DENOMINATOR) for j in numerators]
        if rng.random() < 0.5:
            values = [1 - v for v in values]
    else:
        bound = VALUE_BOUND * MAX_DENOMINATOR
        picked = sorted(int(j) for j in rng.choice(np.arange(-bound, bound + 1), size=count, replace=False))
        values = [Fraction(j, MAX_DENOMINATOR) for j in picked]
        if rng.random() < 0.5:
            values.reverse()
    return PartialMap(space, space, (Piece(component, tuple(zip(xs, values))),))


def random_closed(rng: np.random.Generator, space: AmbientSpace) -> ClosedSet:
    """X ∖ U_k, иногда ∅ или X"""
    roll = rng.random()
    if roll < 0.05:
        return ClosedSet.empty(space)
    if roll < 0.1:
        return ClosedSet.whole(space)
    return ClosedSet(space, random_domain(rng, space, empty_rate=0))


def random_compact_in(rng: np.random.Generator, domain: OpenSet) -> CompactSet:
    """Отрезок [a, b] внутри случайной компоненты непустой области"""
    component = domain.intervals[int(rng.integers(0, len(domain)))]
    closure = component.closure()
    a = random_rational(rng, closure.lo, closure.hi)
    b = random_rational(rng, closure.lo, closure.hi)
    a, b = min(a, b), max(a, b)
    if not component.contains(a):
        a = component.sample_point()
    if not component.contains(b):
        b = component.sample_point()
    a, b = min(a, b), max(a, b)
    return CompactSet(domain.space, (Interval(a, b, False, False),))


def random_neighbourhood(rng: np.random.Generator, f: PartialMap, k: CompactSet) -> OpenSet:
    """Открытое V ⊇ f(K): образ, расширенный на случайные поля"""
    fk = image_of_compact(f, k)
    lo, hi = fk.intervals[0].lo, fk.intervals[-1].hi
    left = Fraction(int(rng.integers(1, 17)), 16)
    right = Fraction(int(rng.integers(1, 17)), 16)
    return OpenSet(f.codomain, (Interval(lo - left, hi + right, True, True),))


def random_perturbation(rng: np.random.Generator, f: PartialMap, eps: Fraction) -> PartialMap:
    """Сдвиг значений в узлах f на величины из (-1.5 eps, 1.5 eps)"""
    lo, hi = _value_range(f.codomain)
    pieces = []
    for piece in f.pieces:
        nodes = []
        for x, y in piece.nodes:
            shift = eps * Fraction(int(rng.integers(-24, 25)), 16)
            value = y + shift
            if f.codomain is AmbientSpace.UNIT_INTERVAL:
                value = min(max(value, lo), hi)
            nodes.append((x, value))
        pieces.append(Piece(piece.component, tuple(nodes)))
    return PartialMap(f.space, f.codomain, tuple(pieces))


def random_subdomain(rng: np.random.Generator, f: PartialMap) -> IntervalSet:
    """Случайное открытое множество, пересекаемое с dom(f) при сужении"""
    return random_domain(rng, f.space, empty_rate=0.05)
