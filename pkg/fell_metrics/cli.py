"""
Командная строка fell_metrics

Примеры:
  python -m fell_metrics dist f.json g.json --tol 1/4096
  python -m fell_metrics dist ce8.json empty.json --gamma
  python -m fell_metrics fell-dist A.json B.json --tol 1/1024
  python -m fell_metrics member f.json --kind co --k "[1/4,1/2]" --v "(0,1)"
  python -m fell_metrics converge --seq counterexample --target empty --indices 1,2,4,8,16,32
  python -m fell_metrics converge --seq "affine:a=1+1/n,b=0,dom=(0,1)" --inverse-check id id --compacts "[1/4,1/2]"
  python -m fell_metrics counterexample --count 8 --out-dir data
  python -m fell_metrics axioms --samples 100 --seed 42
"""
import argparse
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .config import OUTPUT_FORMATS, load_settings
from .convergence import (
    SequenceSpec,
    beta_decay_report,
    counterexample_gamma,
    gamma_cauchy_check,
    inverse_limit_check,
    limit_candidate,
)
from .enclosure import TruncationPlan
from .errors import FellMetricsError, ParseError
from .formats import (
    format_rational,
    load_closed,
    load_map,
    parse_compact_text,
    parse_indices,
    parse_open_text,
    parse_rational,
    parse_sequence,
    render,
    save_json,
    write_output,
)
from .hyperspace import d_fell, fell_hit, fell_miss
from .metric import (
    beta,
    d_gamma,
    empty_separation_witness,
    in_ball,
    in_compact_open,
    in_compact_open_inv,
    in_domain_hit,
    in_domain_miss,
    in_image_hit,
    in_image_miss,
    separation_radius,
)
from .partial_map import PartialMap, constant_on, empty_map, identity_on, invert

MEMBER_KINDS = (
    "co", "co-inv", "hit", "miss", "ball",
    "domain-hit", "domain-miss", "image-hit", "image-miss", "separation",
)


@dataclass(frozen=True)
class RunConfig:
    """Параметры одного запуска"""
    command: str
    args: argparse.Namespace
    tolerance: Fraction
    n_cutoff: Optional[int]
    m_cutoff: Optional[int]
    samples: int
    seed: int
    search_bound: int
    output_format: str
    out: Optional[str]
    quiet: bool

    def plan(self, tol: Optional[Fraction] = None) -> TruncationPlan:
        return TruncationPlan.for_tolerance(tol or self.tolerance, self.n_cutoff, self.m_cutoff)

    def log(self, message: str):
        if not self.quiet:
            print(message, file=sys.stderr, flush=True)


def _tolerance(text: str) -> Fraction:
    try:
        value = parse_rational(text)
    except ParseError as e:
        raise argparse.ArgumentTypeError(str(e))
    if not isinstance(value, Fraction):
        raise argparse.ArgumentTypeError(f"Точность должна быть конечной: {text!r}")
    return value


def _emit(config: RunConfig, report: dict, rows: List[dict]):
    write_output(render(report, rows, config.output_format), config.out)
    if config.out:
        config.log(f"✅ Отчет записан в {config.out}")


# ---------------------------------------------------------------------------
# Команды
# ---------------------------------------------------------------------------

def cmd_dist(config: RunConfig) -> int:
    args = config.args
    f, g = load_map(args.first), load_map(args.second)
    started = time.perf_counter()
    if args.gamma:
        metric = "d_gamma"
        enclosure = d_gamma(f, g, config.tolerance, config.n_cutoff, config.m_cutoff)
        plan = TruncationPlan.for_tolerance(config.tolerance / 2, config.n_cutoff, config.m_cutoff)
    else:
        metric = "beta"
        plan = config.plan()
        enclosure = beta(f, g, config.tolerance, plan)
    config.log(f"📊 {metric}: [{format_rational(enclosure.lo)}, {format_rational(enclosure.hi)}] "
               f"за {time.perf_counter() - started:.2f} с")
    report = {
        "command": "dist",
        "metric": metric,
        "enclosure": enclosure,
        "tolerance": config.tolerance,
        "truncation": {"n": plan.n_cutoff, "m": plan.m_cutoff},
    }
    _emit(config, report, [{"metric": metric, "value": enclosure}])
    return 0


def cmd_fell_dist(config: RunConfig) -> int:
    args = config.args
    a, b = load_closed(args.first), load_closed(args.second)
    plan = config.plan()
    enclosure = d_fell(a, b, config.tolerance, plan)
    config.log(f"📊 d_Fell: [{format_rational(enclosure.lo)}, {format_rational(enclosure.hi)}]")
    report = {
        "command": "fell-dist",
        "metric": "d_fell",
        "enclosure": enclosure,
        "tolerance": config.tolerance,
        "truncation": {"n": plan.n_cutoff, "m": plan.m_cutoff},
    }
    _emit(config, report, [{"metric": "d_fell", "value": enclosure}])
    return 0


def _require(value: Optional[str], flag: str, kind: str) -> str:
    if value is None:
        raise ParseError(f"Для --kind {kind} нужен параметр {flag}")
    return value


def cmd_member(config: RunConfig) -> int:
    args = config.args
    kind = args.kind
    report = {"command": "member", "kind": kind}

    if kind in ("hit", "miss"):
        a = load_closed(args.path)
        if kind == "hit":
            v = parse_open_text(_require(args.v, "--v", kind), a.space)
            report["member"] = fell_hit(a, v)
        else:
            k = parse_compact_text(_require(args.k, "--k", kind), a.space)
            report["member"] = fell_miss(a, k)
    else:
        f = load_map(args.path)
        if kind == "co":
            k = parse_compact_text(_require(args.k, "--k", kind), f.space)
            v = parse_open_text(_require(args.v, "--v", kind), f.codomain)
            report["member"] = in_compact_open(f, k, v)
            if report["member"] and not k.is_empty:
                report["separation_radius"] = separation_radius(f, k, v)
        elif kind == "co-inv":
            k = parse_compact_text(_require(args.k, "--k", kind), f.codomain)
            v = parse_open_text(_require(args.v, "--v", kind), f.space)
            report["member"] = in_compact_open_inv(f, k, v)
        elif kind == "ball":
            center = load_map(_require(args.center, "--center", kind))
            k = parse_compact_text(_require(args.k, "--k", kind), f.space)
            eps = parse_rational(_require(args.eps, "--eps", kind))
            report["member"] = in_ball(f, center, k, eps)
        elif kind == "domain-hit":
            report["member"] = in_domain_hit(f, parse_open_text(_require(args.v, "--v", kind), f.space))
        elif kind == "domain-miss":
            report["member"] = in_domain_miss(f, parse_compact_text(_require(args.k, "--k", kind), f.space))
        elif kind == "image-hit":
            report["member"] = in_image_hit(f, parse_open_text(_require(args.v, "--v", kind), f.codomain))
        elif kind == "image-miss":
            report["member"] = in_image_miss(f, parse_compact_text(_require(args.k, "--k", kind), f.codomain))
        else:
            report["witness"] = empty_separation_witness(f, args.bound or config.search_bound)

    if "member" in report:
        config.log(("✅" if report["member"] else "⚠️") + f" {kind}: {report['member']}")
    _emit(config, report, [report])
    return 0


def _keyword_or_file(text: str, seq: SequenceSpec) -> PartialMap:
    """empty, zero и id строятся по f_1; иначе text это путь к файлу отображения"""
    first = seq(1)
    if text == "empty":
        return empty_map(first.space, first.codomain)
    if text == "zero":
        return constant_on(first.domain, 0, first.codomain)
    if text == "id":
        return identity_on(first.domain)
    return load_map(text)


def _compacts(text: Optional[str], seq: SequenceSpec):
    if not text:
        return []
    space = seq(1).space
    return [parse_compact_text(part, space) for part in text.split(";") if part.strip()]


def cmd_converge(config: RunConfig) -> int:
    args = config.args
    seq = parse_sequence(args.seq)
    compacts = _compacts(args.compacts, seq)
    indices = parse_indices(args.indices) if args.indices else None
    config.log(f"📊 Последовательность {seq.name}")

    if args.inverse_check:
        f_cand, g_cand = (_keyword_or_file(t, seq) for t in args.inverse_check)
        report = inverse_limit_check(
            seq, f_cand, g_cand, compacts, config.tolerance,
            indices=indices or list(range(1, 9)),
            inverse_compacts=_compacts(args.inverse_compacts, seq) or None,
            plan=config.plan(),
        )
    elif args.target:
        target = _keyword_or_file(args.target, seq)
        report = beta_decay_report(seq, target, indices or list(range(1, 9)), config.tolerance, config.plan())
    else:
        report = gamma_cauchy_check(seq, args.prefix, compacts, config.tolerance, cutoff=args.cutoff)

    data = {"command": "converge", "report": report}
    if args.limit_at:
        if not compacts:
            raise ParseError("Для --limit-at нужен хотя бы один компакт в --compacts")
        mesh = parse_rational(args.mesh)
        data["limit_candidate"] = limit_candidate(seq, compacts[0], args.limit_at, mesh)

    mark = {"holds-on-prefix": "✅", "fails-with-witness": "❌"}.get(report.verdict.value, "⚠️")
    config.log(f"{mark} Вердикт: {report.verdict.value}")
    _emit(config, data, report.rows)
    return 0


def cmd_counterexample(config: RunConfig) -> int:
    args = config.args
    os.makedirs(args.out_dir, exist_ok=True)
    files = []
    for n in range(1, args.count + 1):
        f = counterexample_gamma(n)
        for name, value in ((f"ce{n}.json", f), (f"ce{n}_inv.json", invert(f))):
            path = os.path.join(args.out_dir, name)
            save_json(value, path)
            files.append(path)
    empty_path = os.path.join(args.out_dir, "empty.json")
    save_json(empty_map(counterexample_gamma(1).space), empty_path)
    files.append(empty_path)
    config.log(f"✅ Записано файлов: {len(files)}")
    _emit(config, {"command": "counterexample", "files": files}, [{"file": p} for p in files])
    return 0


def cmd_axioms(config: RunConfig) -> int:
    from .axioms import run_suites

    started = time.perf_counter()
    results = run_suites(config.samples, config.seed, progress=config.log)
    failed = [r for r in results if not r.passed]
    config.log(f"📊 Время: {time.perf_counter() - started:.1f} с")
    rows = [
        {
            "suite": r.name,
            "total": r.total,
            "failed": r.failed,
            "inconclusive": r.inconclusive,
            "witnesses": r.witnesses,
        }
        for r in results
    ]
    report = {"command": "axioms", "samples": config.samples, "seed": config.seed, "suites": rows}
    _emit(config, report, rows)
    if failed:
        config.log(f"❌ Нарушения в наборах: {', '.join(r.name for r in failed)}")
        return 1
    config.log("✅ Все проверки пройдены")
    return 0


# ---------------------------------------------------------------------------
# Разбор аргументов
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_tolerance, default=None, help="Точность (рациональное число, например 1/4096)")
    common.add_argument("--trunc-n", type=int, default=None, help="Граница суммирования по n")
    common.add_argument("--trunc-m", type=int, default=None, help="Граница суммирования по m")
    common.add_argument("--samples", type=int, default=None, help="Размер выборки для axioms")
    common.add_argument("--seed", type=int, default=None, help="Зерно генератора")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=None, help="Формат вывода")
    common.add_argument("--out", type=str, default=None, help="Файл для отчета (по умолчанию stdout)")
    common.add_argument("--quiet", action="store_true", help="Без строк прогресса на stderr")

    parser = argparse.ArgumentParser(
        prog="fell_metrics",
        description="Метрики на пространствах частичных отображений и гиперпространстве замкнутых множеств",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pd = sub.add_parser("dist", parents=[common], help="Оценка β или d_γ для двух отображений")
    pd.add_argument("first")
    pd.add_argument("second")
    pd.add_argument("--gamma", action="store_true", help="Считать d_γ (требует инъективности)")
    pd.set_defaults(func=cmd_dist)

    pf = sub.add_parser("fell-dist", parents=[common], help="Оценка d_Fell для двух замкнутых множеств")
    pf.add_argument("first")
    pf.add_argument("second")
    pf.set_defaults(func=cmd_fell_dist)

    pm = sub.add_parser("member", parents=[common], help="Принадлежность подбазисному множеству")
    pm.add_argument("path", help="Файл отображения (для hit/miss: файл замкнутого множества)")
    pm.add_argument("--kind", choices=MEMBER_KINDS, required=True)
    pm.add_argument("--k", default=None, help="Компакт, например \"[0,1/4]+[1/2,1]\"")
    pm.add_argument("--v", default=None, help="Открытое множество, например \"(0,1)\"")
    pm.add_argument("--center", default=None, help="Центр шара (для ball)")
    pm.add_argument("--eps", default=None, help="Радиус шара (для ball)")
    pm.add_argument("--bound", type=int, default=None, help="Граница поиска (для separation)")
    pm.set_defaults(func=cmd_member)

    pc = sub.add_parser("converge", parents=[common], help="Диагностика сходимости последовательности")
    pc.add_argument("--seq", required=True, help="counterexample | counterexample_inverse | constant:FILE | affine:...")
    pc.add_argument("--target", default=None, help="Файл или empty | zero | id: таблица β(f_n, target)")
    pc.add_argument("--compacts", default=None, help="Компакты через \";\"")
    pc.add_argument("--inverse-compacts", default=None, help="Компакты для обратных отображений")
    pc.add_argument("--inverse-check", nargs=2, metavar=("F", "G"), default=None)
    pc.add_argument("--indices", default=None, help="Индексы: \"1,2,4,8\" или \"1-32\"")
    pc.add_argument("--prefix", type=int, default=16, help="Длина префикса для проверки γ-Кошиевости")
    pc.add_argument("--cutoff", type=int, default=8, help="Сетка m + n <= cutoff для сигнатур")
    pc.add_argument("--limit-at", type=int, default=None, help="Индекс для кандидата в предел")
    pc.add_argument("--mesh", default="1/64", help="Шаг сетки для кандидата в предел")
    pc.set_defaults(func=cmd_converge)

    pe = sub.add_parser("counterexample", parents=[common], help="Записать f_n(x) = nx и обратные в файлы")
    pe.add_argument("--count", type=int, default=8)
    pe.add_argument("--out-dir", default=".")
    pe.set_defaults(func=cmd_counterexample)

    pa = sub.add_parser("axioms", parents=[common], help="Проверки инвариантов на случайных образцах")
    pa.set_defaults(func=cmd_axioms)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    settings = load_settings(
        tolerance=args.tol, seed=args.seed, samples=args.samples, output_format=args.format,
    )
    return RunConfig(
        command=args.command,
        args=args,
        tolerance=settings.tolerance,
        n_cutoff=args.trunc_n,
        m_cutoff=args.trunc_m,
        samples=settings.samples,
        seed=settings.seed,
        search_bound=settings.search_bound,
        output_format=settings.output_format,
        out=args.out,
        quiet=args.quiet,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = make_config(args)
        return args.func(config)
    except FellMetricsError as e:
        print(f"❌ Ошибка: {e}", file=sys.stderr, flush=True)
        return 2
