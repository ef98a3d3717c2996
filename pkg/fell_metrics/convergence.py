"""
Диагностика сходимости последовательностей частичных отображений:
γ-Кошиевость, убывание β, кандидат в предел, контрпример в Γ[0,1]
и проверка теоремы об обратном пределе.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import sympy
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from .basis import INF, AmbientSpace, CompactSet, Interval, IntervalSet, OpenSet, format_interval
from .enclosure import Enclosure, TruncationPlan, check_tolerance
from .errors import DomainError, HypothesisError, InjectivityError, ParseError, PreconditionError
from .hyperspace import ClosedSet, closed_from_signature, complement_of_domain, d_fell, fell_miss, fell_signature
from .metric import beta, sup_distance
from .partial_map import (
    GammaMap,
    Piece,
    PartialMap,
    affine_on,
    compose,
    equal,
    evaluate,
    identity_on,
    image,
    invert,
    uncovered_point,
)

DEFAULT_CUTOFF = 8


class Verdict(Enum):
    HOLDS = "holds-on-prefix"
    FAILS = "fails-with-witness"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SequenceSpec:
    """Детерминированное правило n ↦ f_n (n >= 1)"""
    name: str
    generator: Callable[[int], PartialMap]

    def __call__(self, n: int) -> PartialMap:
        if n < 1:
            raise PreconditionError(f"Индекс последовательности должен быть >= 1, получено {n}")
        f = self.generator(n)
        return f.base if isinstance(f, GammaMap) else f

    def terms(self, indices: Sequence[int]) -> Dict[int, PartialMap]:
        return {n: self(n) for n in indices}


@dataclass(frozen=True)
class CompactReport:
    """Поведение последовательности на одном компакте"""
    compact: CompactSet
    first_covered: Optional[int]
    distances: Dict[int, Fraction]
    relevant: bool
    verdict: Verdict
    witness: Optional[dict] = None


@dataclass
class CauchyReport:
    """
    Отчет диагностики. rows: по одной строке на индекс (значения Enclosure
    или Fraction); compacts: отчеты по компактам; verdict: итог на префиксе.
    """
    kind: str
    sequence: str
    indices: List[int]
    rows: List[dict] = field(default_factory=list)
    compacts: List[CompactReport] = field(default_factory=list)
    verdict: Verdict = Verdict.INCONCLUSIVE
    witness: Optional[dict] = None
    limit: Optional[ClosedSet] = None
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LimitCandidate:
    """Интерполянт f_{at} по сетке на K и диагностическая (не гарантированная) оценка ошибки"""
    map: PartialMap
    index: int
    mesh: Fraction
    slope: Fraction
    tail_distance: Optional[Fraction]
    bound: Fraction


# ---------------------------------------------------------------------------
# Выражения от n
# ---------------------------------------------------------------------------

N_SYMBOL = sympy.Symbol("n", integer=True, positive=True)

# Только то, что порождают стандартные преобразования parse_expr
_PARSE_GLOBALS = {
    "__builtins__": {},
    "Integer": sympy.Integer,
    "Rational": sympy.Rational,
    "Float": sympy.Float,
    "Symbol": sympy.Symbol,
    "Function": sympy.Function,
}


def _check_structure(expr, text: str):
    if not isinstance(expr, sympy.Expr):
        raise ParseError(f"Выражение {text!r} не является числовым")
    extra = expr.free_symbols - {N_SYMBOL}
    if extra:
        raise ParseError(f"В выражении {text!r} допустима только переменная n, найдено: {sorted(map(str, extra))}")
    if expr.atoms(sympy.Function):
        raise ParseError(f"Функции в выражении {text!r} не поддерживаются")
    for number in expr.atoms(sympy.Number):
        if not (number.is_Rational or number in (sympy.oo, -sympy.oo)):
            raise ParseError(f"Допустимы только рациональные числа, найдено {number} в {text!r}")
    for power in expr.atoms(sympy.Pow):
        if not power.exp.is_Integer:
            raise ParseError(f"Показатель степени должен быть целым: {power}")


def _to_fraction(value, n: int):
    if value == sympy.oo:
        return INF
    if value == -sympy.oo:
        return -INF
    if value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    if value.has(sympy.zoo, sympy.nan):
        raise ParseError(f"Деление на ноль при n = {n}")
    raise ParseError(f"Значение {value} при n = {n} не рационально")


def parse_expression(text: str) -> Callable[[int], Fraction]:
    """
    Разбирает рациональное выражение от n: целые числа, n, inf, + - * / **

    Args:
        text: Текст выражения, например "1+1/n"

    Returns:
        Функция n ↦ значение (Fraction или ±inf)

    Raises:
        ParseError: синтаксическая ошибка, посторонние имена, нецелые степени
            или нерациональное значение при n = 1
    """
    try:
        expr = parse_expr(text.strip(), local_dict={"n": N_SYMBOL, "inf": sympy.oo},
                          global_dict=dict(_PARSE_GLOBALS), transformations=standard_transformations)
    except Exception as e:
        raise ParseError(f"Не удалось разобрать выражение {text!r}: {e}")
    _check_structure(expr, text)

    def value_at(n: int):
        return _to_fraction(expr.subs(N_SYMBOL, n), n)

    # Проверка на первом индексе: ловит 1/(n-1) и подобное сразу
    value_at(1)
    return value_at


# ---------------------------------------------------------------------------
# Семейства последовательностей
# ---------------------------------------------------------------------------

def counterexample_gamma(n: int) -> GammaMap:
    """f_n(x) = n·x на [0, 1/n) в X = [0,1]"""
    if n < 1:
        raise PreconditionError(f"Индекс должен быть >= 1, получено {n}")
    space = AmbientSpace.UNIT_INTERVAL
    hi = Fraction(1, n)
    piece = Piece(Interval(Fraction(0), hi, False, True), ((Fraction(0), Fraction(0)), (hi, Fraction(1))))
    return GammaMap(PartialMap(space, space, (piece,)))


def counterexample_sequence() -> SequenceSpec:
    return SequenceSpec("counterexample", counterexample_gamma)


def counterexample_inverse_sequence() -> SequenceSpec:
    """f_n⁻¹(x) = x/n на [0,1)"""
    return SequenceSpec("counterexample_inverse", lambda n: invert(counterexample_gamma(n)))


def constant_sequence(f, name: str = "constant") -> SequenceSpec:
    return SequenceSpec(name, lambda n: f)


def affine_sequence(a: str, b: str, lo: str, hi: str,
                    lo_open: bool = True, hi_open: bool = True,
                    space: AmbientSpace = AmbientSpace.REALS,
                    codomain: Optional[AmbientSpace] = None) -> SequenceSpec:
    """
    Семейство f_n(x) = a(n)·x + b(n) на интервале с концами lo(n), hi(n)

    Args:
        a, b: Выражения от n для наклона и сдвига
        lo, hi: Выражения от n для концов области
        lo_open, hi_open: Открытость концов (замкнутым может быть только конец X)
        space: Объемлющее пространство
        codomain: Пространство значений (по умолчанию space)
    """
    a_fn, b_fn = parse_expression(a), parse_expression(b)
    lo_fn, hi_fn = parse_expression(lo), parse_expression(hi)
    codomain = codomain or space

    def generate(n: int) -> PartialMap:
        slope, shift = a_fn(n), b_fn(n)
        domain = OpenSet(space, (Interval(lo_fn(n), hi_fn(n), lo_open, hi_open),))
        return affine_on(domain, slope, shift, codomain)

    name = f"affine:a={a},b={b},dom={'(' if lo_open else '['}{lo},{hi}{')' if hi_open else ']'}"
    return SequenceSpec(name, generate)


# ---------------------------------------------------------------------------
# Отчеты
# ---------------------------------------------------------------------------

def _check_indices(indices: Sequence[int]) -> List[int]:
    indices = list(indices)
    if not indices:
        raise PreconditionError("Список индексов пуст")
    if any(i < 1 for i in indices) or any(b <= a for a, b in zip(indices, indices[1:])):
        raise PreconditionError("Индексы должны быть положительными и строго возрастать")
    return indices


def beta_decay_report(seq: SequenceSpec, target, indices: Sequence[int], tol,
                      plan: Optional[TruncationPlan] = None) -> CauchyReport:
    """
    Таблица β(f_n, target) по индексам и флаги монотонности верхних границ

    Returns:
        CauchyReport с verdict HOLDS, если hi не возрастает, иначе INCONCLUSIVE
    """
    tol = check_tolerance(tol)
    indices = _check_indices(indices)
    plan = plan or TruncationPlan.for_tolerance(tol)
    report = CauchyReport(kind="beta_decay", sequence=seq.name, indices=indices)
    previous: Optional[Enclosure] = None
    for n in indices:
        enclosure = beta(seq(n), target, tol, plan)
        report.rows.append({
            "index": n,
            "beta": enclosure,
            "hi_decreasing": None if previous is None else enclosure.hi < previous.hi,
            "hi_non_increasing": None if previous is None else enclosure.hi <= previous.hi,
        })
        previous = enclosure

    flags = [row["hi_non_increasing"] for row in report.rows[1:]]
    report.details["strictly_decreasing"] = all(row["hi_decreasing"] for row in report.rows[1:])
    report.details["truncation"] = {"n": plan.n_cutoff, "m": plan.m_cutoff}
    report.verdict = Verdict.HOLDS if all(flags) else Verdict.INCONCLUSIVE
    return report


def _tail_indices(prefix_len: int) -> List[int]:
    size = max(2, prefix_len // 2)
    return list(range(prefix_len - size + 1, prefix_len + 1))


def _detect_limit(maps: Dict[int, PartialMap], prefix_len: int, cutoff: int, space: AmbientSpace):
    signatures = [fell_signature(complement_of_domain(maps[i]), cutoff) for i in _tail_indices(prefix_len)]
    stable = {key: value for key, value in signatures[0].items()
              if all(sig[key] == value for sig in signatures[1:])}
    unstable = sorted(set(signatures[0]) - set(stable))
    return closed_from_signature(stable, space), unstable


def _compact_report(maps: Dict[int, PartialMap], k: CompactSet, limit: ClosedSet) -> CompactReport:
    indices = sorted(maps)
    last = indices[-1]
    relevant = fell_miss(limit, k)
    point = uncovered_point(k, maps[last].domain)
    if point is not None:
        return CompactReport(k, None, {}, relevant, Verdict.FAILS,
                             witness={"index": last, "point": point})

    first = last
    for i in reversed(indices):
        if not k.is_subset(maps[i].domain):
            break
        first = i
    distances = {i: sup_distance(maps[i], maps[last], k) for i in indices if i >= first}
    values = [distances[i] for i in sorted(distances)]
    monotone = all(b <= a for a, b in zip(values, values[1:]))
    return CompactReport(k, first, distances, relevant, Verdict.HOLDS if monotone else Verdict.INCONCLUSIVE)


def gamma_cauchy_check(seq: SequenceSpec, prefix_len: int, compacts: Sequence[CompactSet], tol,
                       cutoff: int = DEFAULT_CUTOFF,
                       candidate: Optional[ClosedSet] = None) -> CauchyReport:
    """
    Проверка γ-Кошиевости на префиксе f_1..f_P

    (а) предел D(f_n) ищется стабилизацией сигнатур hit/miss на второй половине
    префикса (или берется candidate), в таблицу пишется d_Fell(D(f_i), A);
    (б) для каждого K первый индекс, с которого K ⊆ dom(f_i) до конца префикса,
    и d_K(f_i, f_P) далее. Вердикт учитывает только K ⊆ X ∖ A.

    Свидетель непокрытого K лежит в compacts[i].witness с verdict FAILS;
    если такой K не лежит в X ∖ A (relevant = False), общий verdict его не учитывает.
    Так для f_n(x) = nx и K = [1/4, 1/2] отчет по K дает FAILS, а общий итог HOLDS.

    Args:
        seq: Последовательность
        prefix_len: Длина префикса P >= 2
        compacts: Компакты для проверки равномерной Кошиевости
        tol: Точность оценок d_Fell
        cutoff: Граница сетки m + n <= cutoff для сигнатур
        candidate: Предполагаемый предел D(f_n)
    """
    if prefix_len < 2:
        raise PreconditionError(f"Длина префикса должна быть >= 2, получено {prefix_len}")
    tol = check_tolerance(tol)
    indices = list(range(1, prefix_len + 1))
    maps = seq.terms(indices)
    space = maps[1].space
    report = CauchyReport(kind="gamma_cauchy", sequence=seq.name, indices=indices)

    # Шаг 1: Предел областей по сигнатурам
    unstable: list = []
    if candidate is None:
        candidate, unstable = _detect_limit(maps, prefix_len, cutoff, space)
    report.limit = candidate
    report.details["unstable_cells"] = unstable
    report.details["cutoff"] = cutoff

    # Шаг 2: Расстояния d_Fell до предела
    for i in indices:
        report.rows.append({"index": i, "d_fell": d_fell(complement_of_domain(maps[i]), candidate, tol)})

    # Шаг 3: Равномерная Кошиевость на компактах
    report.compacts = [_compact_report(maps, k, candidate) for k in compacts]
    relevant = [c for c in report.compacts if c.relevant]
    failed = [c for c in relevant if c.verdict is Verdict.FAILS]
    if failed:
        report.verdict = Verdict.FAILS
        report.witness = failed[0].witness
    elif not unstable and all(c.verdict is Verdict.HOLDS for c in relevant):
        report.verdict = Verdict.HOLDS
    else:
        report.verdict = Verdict.INCONCLUSIVE
    return report


def _slope_on(f: PartialMap, k: CompactSet) -> Fraction:
    best = Fraction(0)
    for iv in k:
        piece = f.piece_covering(iv)
        for seg in piece.segments():
            if iv.intersect(seg.span.closure()) is not None:
                best = max(best, abs(seg.slope))
    return best


def limit_candidate(seq: SequenceSpec, k: CompactSet, at_index: int, mesh) -> LimitCandidate:
    """
    Кусочно-линейный интерполянт f_{at} по сетке шага mesh на K

    Returns:
        LimitCandidate на int(K); bound = наклон·mesh + d_K(f_{at-1}, f_{at})

    Raises:
        DomainError: K ⊄ dom(f_{at})
    """
    mesh = Fraction(mesh)
    if mesh <= 0:
        raise PreconditionError(f"Шаг сетки должен быть положительным, получено {mesh}")
    f = seq(at_index)
    point = uncovered_point(k, f.domain)
    if point is not None:
        raise DomainError(f"Компакт не покрыт областью f_{at_index}: точка {point}", point=point)

    pieces = []
    for component in k.interior():
        a, b = component.lo, component.hi
        xs = []
        x = a
        while x < b:
            xs.append(x)
            x += mesh
        xs.append(b)
        pieces.append(Piece(component, tuple((x, evaluate(f, x)) for x in xs)))
    interpolant = PartialMap(f.space, f.codomain, tuple(pieces))

    slope = _slope_on(f, k)
    tail: Optional[Fraction] = Fraction(0)
    if at_index > 1:
        previous = seq(at_index - 1)
        tail = sup_distance(previous, f, k) if k.is_subset(previous.domain) else None
    bound = slope * mesh + (tail if tail is not None else Fraction(1))
    return LimitCandidate(interpolant, at_index, mesh, slope, tail, bound)


def inverse_limit_check(seq: SequenceSpec, f_cand, g_cand, compacts: Sequence[CompactSet], tol,
                        indices: Sequence[int] = tuple(range(1, 9)),
                        inverse_compacts: Optional[Sequence[CompactSet]] = None,
                        plan: Optional[TruncationPlan] = None) -> CauchyReport:
    """
    Проверка теоремы об обратном пределе: при im(f) ⊆ dom(g) и im(g) ⊆ dom(f)
    отображения f, g являются гомеоморфизмами и g = f⁻¹

    Raises:
        HypothesisError: нарушено одно из включений (со свидетелем) или f_n не инъективно
    """
    tol = check_tolerance(tol)
    indices = _check_indices(indices)
    f_cand = f_cand.base if isinstance(f_cand, GammaMap) else f_cand
    g_cand = g_cand.base if isinstance(g_cand, GammaMap) else g_cand
    for name, left, right in (("im(f) ⊆ dom(g)", f_cand, g_cand), ("im(g) ⊆ dom(f)", g_cand, f_cand)):
        point = uncovered_point(image(left), right.domain)
        if point is not None:
            raise HypothesisError(f"Не выполнено {name}: точка {point}", witness=point)

    # Проверяем тождества композиций
    identities = {
        "g∘f = id": equal(compose(g_cand, f_cand), identity_on(f_cand.domain)),
        "f∘g = id": equal(compose(f_cand, g_cand), identity_on(g_cand.domain)),
    }
    report = CauchyReport(kind="inverse_limit", sequence=seq.name, indices=indices)
    report.details["identities"] = identities
    plan = plan or TruncationPlan.for_tolerance(tol)
    inverse_compacts = list(compacts if inverse_compacts is None else inverse_compacts)

    # Таблица расстояний по индексам
    distances: Dict[str, List[Optional[Fraction]]] = {}
    for n in indices:
        f_n = seq(n)
        try:
            g_n = invert(f_n).base
        except InjectivityError as e:
            raise HypothesisError(f"f_{n} не инъективно: {e}", witness=e.witness)
        row = {
            "index": n,
            "beta": beta(f_n, f_cand, tol, plan),
            "beta_inverse": beta(g_n, g_cand, tol, plan),
        }
        for label, maps, ks in (("K", (f_n, f_cand), compacts), ("K'", (g_n, g_cand), inverse_compacts)):
            for k in ks:
                key = f"{label} {format_compact(k)}"
                covered = k.is_subset(maps[0].domain) and k.is_subset(maps[1].domain)
                value = sup_distance(maps[0], maps[1], k) if covered else None
                row[key] = value
                distances.setdefault(key, []).append(value)
        report.rows.append(row)

    decaying = all(
        None not in values and all(b <= a for a, b in zip(values, values[1:]))
        for values in distances.values()
    )
    if not all(identities.values()):
        report.verdict = Verdict.FAILS
        report.witness = {"identity": [name for name, ok in identities.items() if not ok][0]}
    elif decaying:
        report.verdict = Verdict.HOLDS
    else:
        report.verdict = Verdict.INCONCLUSIVE
    return report


def format_compact(k: IntervalSet) -> str:
    return " ∪ ".join(format_interval(iv) for iv in k) or "∅"
