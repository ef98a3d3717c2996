"""
Кусочно-линейные непрерывные частичные отображения с открытой областью
определения: носитель C_od(X,Y) и, при инъективности, Γ(X).
"""
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .basis import (
    AmbientSpace,
    CompactSet,
    Endpoint,
    Interval,
    IntervalSet,
    OpenSet,
    _sort_key,
    format_interval,
    is_infinite,
    make_interval,
)
from .errors import (
    AmbientMismatchError,
    DomainError,
    IncompatibilityError,
    InjectivityError,
    PreconditionError,
    RepresentationError,
)

Node = Tuple[Fraction, Fraction]


def _collinear(a: Node, b: Node, c: Node) -> bool:
    return (b[1] - a[1]) * (c[0] - b[0]) == (c[1] - b[1]) * (b[0] - a[0])


def _slope(a: Node, b: Node) -> Fraction:
    return (b[1] - a[1]) / (b[0] - a[0])


def _canonical_nodes(component: Interval, nodes: Sequence[Node]) -> Tuple[Node, ...]:
    """
    Канонический список узлов: коллинеарные внутренние узлы удаляются,
    на неограниченной стороне крайний узел ставится на 1 дальше последнего излома.
    """
    pts = list(nodes)
    left_ray, right_ray = is_infinite(component.lo), is_infinite(component.hi)
    if len(pts) == 1 and (left_ray or right_ray):
        x, y = pts[0]
        if right_ray:
            pts.append((x + 1, y))
        else:
            pts.insert(0, (x - 1, y))

    out: List[Node] = []
    for p in pts:
        while len(out) >= 2 and _collinear(out[-2], out[-1], p):
            out.pop()
        out.append(p)

    if left_ray and right_ray and len(out) == 2:
        s = _slope(out[0], out[1])
        b = out[0][1] - s * out[0][0]
        return (Fraction(0), b), (Fraction(1), s + b)
    if right_ray:
        (x0, y0), (x1, y1) = out[-2], out[-1]
        out[-1] = (x0 + 1, y0 + _slope(out[-2], out[-1]))
    if left_ray:
        (x0, y0), (x1, y1) = out[0], out[1]
        out[0] = (x1 - 1, y1 - _slope(out[0], out[1]))
    return tuple(out)


@dataclass(frozen=True)
class Segment:
    """Линейный кусок y = slope * x + intercept на x-интервале span (флаги = вхождение в область)"""
    span: Interval
    slope: Fraction
    intercept: Fraction

    def value(self, x: Endpoint) -> Endpoint:
        if is_infinite(x):
            if self.slope == 0:
                return self.intercept
            return x if self.slope > 0 else -x
        return self.slope * x + self.intercept

    def solve(self, y: Endpoint) -> Endpoint:
        """x с value(x) = y (для ненулевого наклона)"""
        if is_infinite(y):
            return y if self.slope > 0 else -y
        return (y - self.intercept) / self.slope

    def image(self) -> Interval:
        if self.slope == 0:
            return Interval(self.intercept, self.intercept, False, False)
        y0, y1 = self.value(self.span.lo), self.value(self.span.hi)
        if self.slope > 0:
            return Interval(y0, y1, self.span.lo_open, self.span.hi_open)
        return Interval(y1, y0, self.span.hi_open, self.span.lo_open)

    def preimage(self, target: Interval) -> Optional[Interval]:
        if self.slope == 0:
            return self.span if target.contains(self.intercept) else None
        if self.slope > 0:
            raw = make_interval(self.solve(target.lo), self.solve(target.hi), target.lo_open, target.hi_open)
        else:
            raw = make_interval(self.solve(target.hi), self.solve(target.lo), target.hi_open, target.lo_open)
        if raw is None:
            return None
        return raw.intersect(self.span)


@dataclass(frozen=True)
class Piece:
    """Компонента области и узлы (x_i, y_i) на ее замыкании"""
    component: Interval
    nodes: Tuple[Node, ...]

    @property
    def xs(self) -> List[Fraction]:
        return [x for x, _ in self.nodes]

    def value_at(self, x: Endpoint) -> Endpoint:
        """Значение непрерывного продолжения на замыкание компоненты"""
        nodes = self.nodes
        if len(nodes) == 1:
            return nodes[0][1]
        i = bisect_right(self.xs, x) - 1
        i = min(max(i, 0), len(nodes) - 2)
        a, b = nodes[i], nodes[i + 1]
        s = _slope(a, b)
        if is_infinite(x):
            return Segment(self.component, s, a[1] - s * a[0]).value(x)
        return a[1] + s * (x - a[0])

    def segments(self) -> List[Segment]:
        comp = self.component
        nodes = self.nodes
        result = []
        if len(nodes) == 1:
            return [Segment(comp, Fraction(0), nodes[0][1])]
        last = len(nodes) - 2
        for i in range(len(nodes) - 1):
            a, b = nodes[i], nodes[i + 1]
            s = _slope(a, b)
            lo, lo_open = a[0], False
            hi, hi_open = b[0], False
            if i == 0:
                lo, lo_open = comp.lo, comp.lo_open
            if i == last:
                hi, hi_open = comp.hi, comp.hi_open
            result.append(Segment(Interval(lo, hi, lo_open, hi_open), s, a[1] - s * a[0]))
        return result


def _validate_nodes(component: Interval, nodes: Sequence[Node]):
    if not nodes:
        raise RepresentationError(f"Компонента {format_interval(component)} не содержит узлов")
    xs = [x for x, _ in nodes]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise RepresentationError("Абсциссы узлов должны строго возрастать")
    if not is_infinite(component.lo) and xs[0] != component.lo:
        raise RepresentationError(
            f"Первый узел {xs[0]} не совпадает с концом компоненты {format_interval(component)}"
        )
    if not is_infinite(component.hi) and xs[-1] != component.hi:
        raise RepresentationError(
            f"Последний узел {xs[-1]} не совпадает с концом компоненты {format_interval(component)}"
        )


@dataclass(frozen=True)
class PartialMap:
    """
    Кусочно-линейное непрерывное отображение с открытой областью определения.
    Узлы хранятся на замыканиях компонент; после создания список узлов
    приведен к каноническому виду, поэтому равенство поэлементное.
    """
    space: AmbientSpace
    codomain: AmbientSpace = AmbientSpace.REALS
    pieces: Tuple[Piece, ...] = field(default=())

    def __post_init__(self):
        pieces = sorted(self.pieces, key=lambda p: _sort_key(p.component))
        components = tuple(p.component for p in pieces)
        if OpenSet(self.space, components).intervals != components:
            raise RepresentationError(
                "Компоненты области должны быть открытыми, попарно непересекающимися и максимальными"
            )
        canonical = []
        for piece in pieces:
            nodes = tuple((Fraction(x), Fraction(y)) for x, y in piece.nodes)
            _validate_nodes(piece.component, nodes)
            canonical.append(Piece(piece.component, _canonical_nodes(piece.component, nodes)))
        object.__setattr__(self, "pieces", tuple(canonical))
        self._check_codomain()

    def _check_codomain(self):
        if self.codomain is AmbientSpace.REALS:
            return
        whole = self.codomain.whole
        for piece in self.pieces:
            for seg in piece.segments():
                if not whole.contains_interval(seg.image().closure()):
                    raise RepresentationError(
                        f"Значения на {format_interval(piece.component)} выходят за пределы {self.codomain.value}"
                    )

    @cached_property
    def domain(self) -> OpenSet:
        return OpenSet(self.space, tuple(p.component for p in self.pieces))

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    def piece_containing(self, x: Fraction) -> Optional[Piece]:
        for piece in self.pieces:
            if piece.component.contains(x):
                return piece
        return None

    def piece_covering(self, part: Interval) -> Optional[Piece]:
        for piece in self.pieces:
            if piece.component.contains_interval(part):
                return piece
        return None

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def __repr__(self) -> str:
        if self.is_empty:
            return f"PartialMap({self.space.value}: ∅)"
        parts = []
        for piece in self.pieces:
            nodes = " ".join(f"({x},{y})" for x, y in piece.nodes)
            parts.append(f"{format_interval(piece.component)}: {nodes}")
        return f"PartialMap({self.space.value}->{self.codomain.value}; " + "; ".join(parts) + ")"


def _as_partial(f) -> PartialMap:
    return f.base if isinstance(f, GammaMap) else f


# ---------------------------------------------------------------------------
# Конструкторы
# ---------------------------------------------------------------------------

def empty_map(space: AmbientSpace = AmbientSpace.REALS,
              codomain: Optional[AmbientSpace] = None) -> PartialMap:
    """Пустое отображение ∅"""
    return PartialMap(space, codomain or space, ())


def _piece_from_values(component: Interval, xs: Iterable[Fraction],
                       value: Callable[[Fraction], Fraction]) -> Piece:
    closure = component.closure()
    pts = {Fraction(x) for x in xs if closure.contains(x)}
    if not is_infinite(component.lo):
        pts.add(component.lo)
    if not is_infinite(component.hi):
        pts.add(component.hi)
    ordered = sorted(pts) or [Fraction(0)]
    if is_infinite(component.lo):
        ordered.insert(0, ordered[0] - 1)
    if is_infinite(component.hi):
        ordered.append(ordered[-1] + 1)
    return Piece(component, tuple((x, value(x)) for x in ordered))


def from_function(domain: IntervalSet, breakpoints: Iterable[Fraction],
                  value: Callable[[Fraction], Fraction],
                  codomain: Optional[AmbientSpace] = None) -> PartialMap:
    """
    Отображение на domain, линейное между заданными изломами

    Args:
        domain: Открытая область определения
        breakpoints: Абсциссы изломов (лишние отбрасываются)
        value: Значения в узлах (включая концы замыканий компонент)
        codomain: Пространство значений (по умолчанию совпадает с domain.space)
    """
    open_domain = domain.as_open()
    xs = list(breakpoints)
    pieces = tuple(_piece_from_values(c, xs, value) for c in open_domain)
    return PartialMap(open_domain.space, codomain or open_domain.space, pieces)


def identity_on(domain: IntervalSet) -> PartialMap:
    return from_function(domain, (), lambda x: x)


def constant_on(domain: IntervalSet, c, codomain: Optional[AmbientSpace] = None) -> PartialMap:
    c = Fraction(c)
    return from_function(domain, (), lambda x: c, codomain)


def affine_on(domain: IntervalSet, a, b, codomain: Optional[AmbientSpace] = None) -> PartialMap:
    """x ↦ a·x + b на domain"""
    a, b = Fraction(a), Fraction(b)
    return from_function(domain, (), lambda x: a * x + b, codomain)


# ---------------------------------------------------------------------------
# Операции
# ---------------------------------------------------------------------------

def evaluate(f, x) -> Fraction:
    """
    Значение f(x) линейной интерполяцией

    Raises:
        DomainError: x не лежит в dom(f)
    """
    f = _as_partial(f)
    x = Fraction(x)
    piece = f.piece_containing(x)
    if piece is None:
        raise DomainError(f"Точка {x} не лежит в области определения", point=x)
    return piece.value_at(x)


def image(f) -> IntervalSet:
    """Точный образ f в виде объединения интервалов с флагами концов"""
    f = _as_partial(f)
    return IntervalSet(f.codomain, tuple(
        seg.image() for piece in f.pieces for seg in piece.segments()
    ))


def _piece_image(piece: Piece, codomain: AmbientSpace) -> IntervalSet:
    return IntervalSet(codomain, tuple(seg.image() for seg in piece.segments()))


def preimage(f, target: IntervalSet) -> IntervalSet:
    """f⁻¹(target) ∩ dom(f); target: любое объединение интервалов в пространстве значений"""
    f = _as_partial(f)
    if target.space is not f.codomain:
        raise AmbientMismatchError("Множество и пространство значений отображения различны")
    parts = []
    for piece in f.pieces:
        for seg in piece.segments():
            for iv in target:
                part = seg.preimage(iv)
                if part is not None:
                    parts.append(part)
    return IntervalSet(f.space, tuple(parts))


def uncovered_point(k: IntervalSet, u: IntervalSet) -> Optional[Fraction]:
    """Точка из k вне u или None, если k ⊆ u"""
    rest = k.difference(u)
    if rest.is_empty:
        return None
    return rest.sample_point()


def image_of_compact(f, k: IntervalSet) -> CompactSet:
    """
    Точный образ f(K) компакта K ⊆ dom(f)

    Raises:
        DomainError: K не лежит в dom(f)
    """
    f = _as_partial(f)
    point = uncovered_point(k, f.domain)
    if point is not None:
        raise DomainError(f"Компакт не лежит в области определения: точка {point}", point=point)
    parts = []
    for iv in k:
        piece = f.piece_covering(iv)
        for seg in piece.segments():
            part = iv.intersect(seg.span.closure())
            if part is None:
                continue
            y0, y1 = seg.value(part.lo), seg.value(part.hi)
            parts.append(Interval(min(y0, y1), max(y0, y1), False, False))
    return CompactSet(f.codomain, tuple(parts))


def restrict(f, u: IntervalSet) -> PartialMap:
    """Сужение f на dom(f) ∩ U"""
    f = _as_partial(f)
    domain = f.domain.intersection(u).as_open()
    pieces = []
    for component in domain:
        source = f.piece_covering(component)
        pieces.append(_piece_from_values(component, source.xs, source.value_at))
    return PartialMap(f.space, f.codomain, tuple(pieces))


def compose(f, g) -> PartialMap:
    """
    Композиция f∘g на g⁻¹(dom(f)); изломы: узлы g и g-прообразы узлов f

    Args:
        f: Внешнее отображение
        g: Внутреннее отображение (пространство значений g = пространство f)
    """
    f, g = _as_partial(f), _as_partial(g)
    if g.codomain is not f.space:
        raise AmbientMismatchError(
            f"Пространство значений g ({g.codomain.value}) не совпадает с пространством f ({f.space.value})"
        )
    # Область определения композиции
    domain = preimage(g, f.domain).as_open()
    f_nodes = [x for piece in f.pieces for x in piece.xs]
    pieces = []
    for component in domain:
        inner = g.piece_covering(component)
        outer = f.piece_containing(inner.value_at(component.sample_point()))
        # Узлы g плюс прообразы узлов f
        xs = list(inner.xs)
        for seg in inner.segments():
            if seg.slope != 0:
                xs.extend(seg.solve(y) for y in f_nodes)
        xs = [x for x in xs if component.contains(x)]
        pieces.append(_piece_from_values(
            component, xs, lambda x, inner=inner, outer=outer: outer.value_at(inner.value_at(x))
        ))
    return PartialMap(g.space, f.codomain, tuple(pieces))


def _injectivity_witness(f: PartialMap) -> Optional[Tuple[Fraction, Fraction]]:
    for piece in f.pieces:
        nodes = piece.nodes
        slopes = [_slope(a, b) for a, b in zip(nodes, nodes[1:])]
        for i, s in enumerate(slopes):
            if s == 0:
                (x0, _), (x1, _) = nodes[i], nodes[i + 1]
                return x0 + (x1 - x0) / 3, x0 + 2 * (x1 - x0) / 3
        for i in range(1, len(slopes)):
            if (slopes[i - 1] > 0) != (slopes[i] > 0):
                (xa, ya), (xt, yt), (xb, yb) = nodes[i - 1], nodes[i], nodes[i + 1]
                d = min(ya - yt, yb - yt, key=abs)
                target = yt + d / 2
                return (xt + (target - yt) / slopes[i - 1],
                        xt + (target - yt) / slopes[i])

    images = [_piece_image(piece, f.codomain) for piece in f.pieces]
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            common = images[i].intersection(images[j])
            if not common.is_empty:
                y = common.sample_point()
                target = IntervalSet(f.codomain, (Interval(y, y, False, False),))
                left = preimage(PartialMap(f.space, f.codomain, (f.pieces[i],)), target)
                right = preimage(PartialMap(f.space, f.codomain, (f.pieces[j],)), target)
                return left.sample_point(), right.sample_point()
    return None


def _inverse_pieces(f: PartialMap) -> Tuple[Piece, ...]:
    if f.codomain is not f.space:
        raise PreconditionError("Частичный гомеоморфизм должен действовать из X в X")
    # Проверка инъективности
    witness = _injectivity_witness(f)
    if witness is not None:
        raise InjectivityError(
            f"Отображение не инъективно: f({witness[0]}) = f({witness[1]})", witness=witness
        )
    pieces = []
    for piece in f.pieces:
        parts = _piece_image(piece, f.codomain).intervals
        component = parts[0]
        if not f.space.is_relatively_open(component):
            raise RepresentationError(
                f"Образ {format_interval(component)} не открыт в {f.space.value}"
            )
        # Меняем местами координаты узлов
        nodes = [(y, x) for x, y in piece.nodes]
        if nodes[0][0] > nodes[-1][0]:
            nodes.reverse()
        pieces.append(Piece(component, tuple(nodes)))
    return tuple(pieces)


@dataclass(frozen=True)
class GammaMap:
    """Частичный гомеоморфизм между открытыми подмножествами X (элемент Γ(X))"""
    base: PartialMap

    def __post_init__(self):
        object.__setattr__(self, "_inverse_data", _inverse_pieces(self.base))

    @property
    def space(self) -> AmbientSpace:
        return self.base.space

    @property
    def domain(self) -> OpenSet:
        return self.base.domain

    @property
    def is_empty(self) -> bool:
        return self.base.is_empty

    @cached_property
    def inverse(self) -> "GammaMap":
        return GammaMap(PartialMap(self.space, self.space, self._inverse_data))

    def __call__(self, x) -> Fraction:
        return evaluate(self.base, x)


def as_gamma(f) -> GammaMap:
    """Проверяет инъективность и открытость образа"""
    return f if isinstance(f, GammaMap) else GammaMap(f)


def invert(f) -> GammaMap:
    """
    Обратное отображение с узлами (y_i, x_i)

    Raises:
        InjectivityError: f не инъективно (с парой точек-свидетелей)
    """
    return as_gamma(f).inverse


def join(fs: Sequence) -> PartialMap:
    """
    Функция-объединение ⋁ f_i на объединении областей

    Raises:
        IncompatibilityError: отображения расходятся на пересечении (с точкой-свидетелем)
    """
    maps = [_as_partial(f) for f in fs]
    if not maps:
        raise PreconditionError("Нечего объединять: пустой список отображений")
    space, codomain = maps[0].space, maps[0].codomain
    for f in maps:
        if f.space is not space or f.codomain is not codomain:
            raise AmbientMismatchError("Объединяемые отображения лежат в разных пространствах")

    # Попарная проверка согласованности на пересечениях
    for i in range(len(maps)):
        for j in range(i + 1, len(maps)):
            _check_agreement(maps[i], maps[j])

    # Склеиваем куски по компонентам объединения
    domain = OpenSet(space, tuple(p.component for f in maps for p in f.pieces))
    pieces = []
    for component in domain:
        sources = [p for f in maps for p in f.pieces if component.contains_interval(p.component)]
        xs = [x for p in sources for x in p.xs]

        def value(x, sources=sources):
            for p in sources:
                if p.component.closure().contains(x):
                    return p.value_at(x)
            raise DomainError(f"Точка {x} вне объединения областей", point=x)

        pieces.append(_piece_from_values(component, xs, value))
    return PartialMap(space, codomain, tuple(pieces))


def _check_agreement(f: PartialMap, g: PartialMap):
    overlap = f.domain.intersection(g.domain)
    for component in overlap:
        inner = {x for h in (f, g) for p in h.pieces for x in p.xs if component.contains(x)}
        pts = sorted(inner)
        if not is_infinite(component.lo):
            pts.insert(0, component.lo)
        if not is_infinite(component.hi):
            pts.append(component.hi)
        if not pts:
            pts = [Fraction(0)]
        if is_infinite(component.lo):
            pts.insert(0, pts[0] - 1)
        if is_infinite(component.hi):
            pts.append(pts[-1] + 1)
        for a, b in zip(pts, pts[1:]):
            for t in (a + (b - a) / 3, a + 2 * (b - a) / 3):
                if evaluate(f, t) != evaluate(g, t):
                    raise IncompatibilityError(
                        f"Отображения расходятся в точке {t}: {evaluate(f, t)} ≠ {evaluate(g, t)}", point=t
                    )


def equal(f, g) -> bool:
    """Совпадают ли области (как множества точек) и значения"""
    return _as_partial(f) == _as_partial(g)
