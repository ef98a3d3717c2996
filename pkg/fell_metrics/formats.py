"""
Файловые форматы CLI: интервалы, отображения, замкнутые множества,
спецификации последовательностей и запись отчетов в JSON / CSV.
"""
import csv
import io
import json
from decimal import Decimal, localcontext
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .basis import (
    INF,
    AmbientSpace,
    CompactSet,
    Endpoint,
    Interval,
    IntervalSet,
    OpenSet,
    is_infinite,
)
from .convergence import (
    CauchyReport,
    CompactReport,
    LimitCandidate,
    SequenceSpec,
    affine_sequence,
    constant_sequence,
    counterexample_inverse_sequence,
    counterexample_sequence,
)
from .enclosure import Enclosure
from .errors import FellMetricsError, ParseError
from .hyperspace import ClosedSet
from .partial_map import GammaMap, PartialMap, Piece

DECIMAL_DIGITS = 20


# ---------------------------------------------------------------------------
# Числа и интервалы
# ---------------------------------------------------------------------------

def format_rational(x: Endpoint) -> str:
    if is_infinite(x):
        return "inf" if x > 0 else "-inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text) -> Endpoint:
    """Разбирает "p/q", целое, "inf" или "-inf" (числа в JSON допускаются только целые)"""
    if isinstance(text, bool) or isinstance(text, float):
        raise ParseError(f"Ожидалось рациональное число строкой, получено {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"Ожидалось рациональное число, получено {text!r}")
    s = text.strip()
    if s in ("inf", "+inf"):
        return INF
    if s == "-inf":
        return -INF
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"Некорректное рациональное число: {text!r}")
    if "." in s or "e" in s.lower():
        raise ParseError(f"Десятичная запись не допускается: {text!r}")
    return value


def decimal_string(x: Endpoint, digits: int = DECIMAL_DIGITS) -> str:
    """Десятичное приближение, только для отображения"""
    if is_infinite(x):
        return format_rational(x)
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def parse_space(text: Optional[str], default: AmbientSpace = AmbientSpace.REALS) -> AmbientSpace:
    if text is None:
        return default
    try:
        return AmbientSpace(text)
    except ValueError:
        raise ParseError(f"Неизвестное пространство: {text!r} (ожидалось reals или unit_interval)")


def interval_to_dict(iv: Interval) -> Dict[str, Any]:
    return {
        "lo": format_rational(iv.lo),
        "hi": format_rational(iv.hi),
        "lo_open": iv.lo_open,
        "hi_open": iv.hi_open,
    }


def interval_from_dict(data: Dict[str, Any]) -> Interval:
    try:
        return Interval(
            parse_rational(data["lo"]),
            parse_rational(data["hi"]),
            bool(data.get("lo_open", True)),
            bool(data.get("hi_open", True)),
        )
    except KeyError as e:
        raise ParseError(f"В описании интервала нет поля {e}")


def parse_interval_text(text: str) -> Interval:
    """Интервал в записи "(a,b)", "[a,b)", "[a,b]" ..."""
    s = text.strip()
    if len(s) < 5 or s[0] not in "([" or s[-1] not in ")]" or "," not in s:
        raise ParseError(f"Некорректная запись интервала: {text!r}")
    lo, hi = s[1:-1].split(",", 1)
    return Interval(parse_rational(lo), parse_rational(hi), s[0] == "(", s[-1] == ")")


def parse_set_text(text: str, space: AmbientSpace) -> IntervalSet:
    """Объединение интервалов через "+", например "[0,1/4]+[1/2,1]"; "empty" означает пустое множество"""
    s = text.strip()
    if s in ("empty", "∅", ""):
        return IntervalSet(space, ())
    return IntervalSet(space, tuple(parse_interval_text(part) for part in s.split("+")))


def parse_compact_text(text: str, space: AmbientSpace) -> CompactSet:
    return parse_set_text(text, space).as_compact()


def parse_open_text(text: str, space: AmbientSpace) -> OpenSet:
    return parse_set_text(text, space).as_open()


def set_to_text(s: IntervalSet) -> str:
    if s.is_empty:
        return "empty"
    parts = []
    for iv in s:
        left = "(" if iv.lo_open else "["
        right = ")" if iv.hi_open else "]"
        parts.append(f"{left}{format_rational(iv.lo)},{format_rational(iv.hi)}{right}")
    return "+".join(parts)


# ---------------------------------------------------------------------------
# Отображения и замкнутые множества
# ---------------------------------------------------------------------------

def map_to_dict(f) -> Dict[str, Any]:
    f = f.base if isinstance(f, GammaMap) else f
    return {
        "space": f.space.value,
        "codomain": f.codomain.value,
        "pieces": [
            {
                "domain": interval_to_dict(piece.component),
                "nodes": [{"x": format_rational(x), "y": format_rational(y)} for x, y in piece.nodes],
            }
            for piece in f.pieces
        ],
    }


def map_from_dict(data: Dict[str, Any]) -> PartialMap:
    if not isinstance(data, dict) or "pieces" not in data:
        raise ParseError("Описание отображения должно содержать поле pieces")
    space = parse_space(data.get("space"))
    codomain = parse_space(data.get("codomain"), space)
    pieces = []
    for raw in data["pieces"]:
        try:
            nodes = tuple((parse_rational(node["x"]), parse_rational(node["y"])) for node in raw["nodes"])
            pieces.append(Piece(interval_from_dict(raw["domain"]), nodes))
        except (KeyError, TypeError) as e:
            raise ParseError(f"Некорректное описание куска отображения: {e}")
    return PartialMap(space, codomain, tuple(pieces))


def closed_to_dict(a: ClosedSet) -> Dict[str, Any]:
    return {"space": a.space.value, "complement": [interval_to_dict(iv) for iv in a.complement]}


def closed_from_dict(data: Dict[str, Any]) -> ClosedSet:
    if not isinstance(data, dict) or "complement" not in data:
        raise ParseError("Описание замкнутого множества должно содержать поле complement")
    space = parse_space(data.get("space"))
    return ClosedSet(space, OpenSet(space, tuple(interval_from_dict(iv) for iv in data["complement"])))


def _load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise ParseError(f"Файл не найден: {path}")
    except json.JSONDecodeError as e:
        raise ParseError(f"Файл {path} не является корректным JSON: {e}")


def load_map(path: str) -> PartialMap:
    return map_from_dict(_load_json(path))


def load_closed(path: str) -> ClosedSet:
    return closed_from_dict(_load_json(path))


def save_json(data: Any, path: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(data))


# ---------------------------------------------------------------------------
# Спецификации последовательностей
# ---------------------------------------------------------------------------

def split_top_level(text: str, sep: str = ",") -> List[str]:
    """Разбивает по sep вне скобок"""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return [p.strip() for p in parts if p.strip()]


def parse_sequence(text: str) -> SequenceSpec:
    """
    Текстовая форма последовательности:
      counterexample | counterexample_inverse | constant:FILE |
      affine:a=EXPR,b=EXPR,dom=(LO,HI)[,space=reals|unit_interval][,codomain=...]
    """
    s = text.strip()
    if s == "counterexample":
        return counterexample_sequence()
    if s in ("counterexample_inverse", "counterexample-inverse"):
        return counterexample_inverse_sequence()
    family, _, params = s.partition(":")
    if family == "constant" and params:
        return constant_sequence(load_map(params), name=s)
    if family == "affine" and params:
        fields = {}
        for item in split_top_level(params):
            key, eq, value = item.partition("=")
            if not eq:
                raise ParseError(f"Параметр семейства без значения: {item!r}")
            fields[key.strip()] = value.strip()
        missing = {"a", "dom"} - set(fields)
        if missing:
            raise ParseError(f"В описании семейства affine нет параметров: {', '.join(sorted(missing))}")
        dom = fields["dom"]
        if len(dom) < 5 or dom[0] not in "([" or dom[-1] not in ")]":
            raise ParseError(f"Некорректная область семейства: {dom!r}")
        bounds = split_top_level(dom[1:-1])
        if len(bounds) != 2:
            raise ParseError(f"Область должна иметь два конца: {dom!r}")
        space = parse_space(fields.get("space"))
        return affine_sequence(
            fields["a"], fields.get("b", "0"), bounds[0], bounds[1],
            lo_open=dom[0] == "(", hi_open=dom[-1] == ")",
            space=space, codomain=parse_space(fields.get("codomain"), space),
        )
    raise ParseError(f"Неизвестная последовательность: {text!r}")


def parse_indices(text: str) -> List[int]:
    """"1,2,4,8" или диапазон "1-32" """
    s = text.strip()
    try:
        if "-" in s and "," not in s:
            first, last = s.split("-", 1)
            return list(range(int(first), int(last) + 1))
        return [int(part) for part in s.split(",") if part.strip()]
    except ValueError:
        raise ParseError(f"Некорректный список индексов: {text!r}")


# ---------------------------------------------------------------------------
# Отчеты
# ---------------------------------------------------------------------------

def enclosure_to_dict(e: Enclosure) -> Dict[str, str]:
    return {
        "lo": format_rational(e.lo),
        "hi": format_rational(e.hi),
        "lo_decimal": decimal_string(e.lo),
        "hi_decimal": decimal_string(e.hi),
    }


def to_jsonable(value: Any) -> Any:
    """Рекурсивно переводит значения библиотеки в JSON-совместимые"""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, Fraction) or is_infinite(value):
        return format_rational(value)
    if isinstance(value, Enclosure):
        return enclosure_to_dict(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, IntervalSet):
        return set_to_text(value)
    if isinstance(value, ClosedSet):
        return closed_to_dict(value)
    if isinstance(value, (PartialMap, GammaMap)):
        return map_to_dict(value)
    if isinstance(value, CompactReport):
        return {
            "compact": set_to_text(value.compact),
            "first_covered": value.first_covered,
            "distances": {str(i): format_rational(d) for i, d in sorted(value.distances.items())},
            "relevant": value.relevant,
            "verdict": value.verdict.value,
            "witness": to_jsonable(value.witness),
        }
    if isinstance(value, CauchyReport):
        return {
            "kind": value.kind,
            "sequence": value.sequence,
            "indices": value.indices,
            "rows": [to_jsonable(row) for row in value.rows],
            "compacts": [to_jsonable(c) for c in value.compacts],
            "verdict": value.verdict.value,
            "witness": to_jsonable(value.witness),
            "limit": to_jsonable(value.limit),
            "details": to_jsonable(value.details),
        }
    if isinstance(value, LimitCandidate):
        return {
            "map": map_to_dict(value.map),
            "index": value.index,
            "mesh": format_rational(value.mesh),
            "slope": format_rational(value.slope),
            "tail_distance": to_jsonable(value.tail_distance),
            "bound": format_rational(value.bound),
        }
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise FellMetricsError(f"Значение типа {type(value).__name__} не сериализуется")


def dumps(data: Any) -> str:
    return json.dumps(to_jsonable(data), ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def _flatten(row: Dict[str, Any]) -> Dict[str, str]:
    flat = {}
    for key, value in row.items():
        value = to_jsonable(value)
        if isinstance(value, dict) and "lo" in value and "hi" in value:
            # точные значения, затем десятичные для чтения
            flat[f"{key}_lo"] = value["lo"]
            flat[f"{key}_hi"] = value["hi"]
            flat[f"{key}_lo_decimal"] = value.get("lo_decimal", "")
            flat[f"{key}_hi_decimal"] = value.get("hi_decimal", "")
        elif isinstance(value, (dict, list)):
            flat[key] = json.dumps(value, ensure_ascii=False, sort_keys=True)
        else:
            flat[key] = "" if value is None else str(value)
    return flat


def rows_to_csv(rows: List[Dict[str, Any]]) -> str:
    """Строки таблицы в CSV; столбцы в порядке первого появления"""
    flat = [_flatten(row) for row in rows]
    fieldnames: List[str] = []
    for row in flat:
        fieldnames.extend(k for k in row if k not in fieldnames)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    writer.writerows(flat)
    return buffer.getvalue()


def render(data: Any, rows: List[Dict[str, Any]], output_format: str) -> str:
    """JSON: весь отчет; CSV: только таблица rows"""
    if output_format == "csv":
        return rows_to_csv(rows)
    return dumps(data)


def write_output(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        print(text, end="")
