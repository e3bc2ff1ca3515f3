"""Command-line entry point: ``spotprey {simulate,sweep,rates,inspect}``.

Exit codes:

    0  success
    2  usage error (bad or missing flags, invalid parameters)
    3  trace could not be parsed
    4  label filters matched nothing
    5  flat trace rejected under --strict
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import sys
from pathlib import Path

from . import analysis, report
from .engine import SimParams, simulate
from .pricing import transform_trace
from .rates import RateParams, dump_rate_curves
from .trace_io import (
    DEFAULT_FLAT_THRESHOLD,
    FORMATS,
    EmptyFilterError,
    FlatTraceError,
    TraceParseError,
    Verdict,
    check_oscillation,
    filter_trace,
    parse_trace,
    require_oscillation,
    trace_stats,
)

logger = logging.getLogger("spotprey")

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_EMPTY_FILTER = 4
EXIT_FLAT = 5

PARAM_NAMES = ("k", "a", "b", "alpha", "beta", "dt", "d0", "r0")
SWEEP_NAMES = ("k", "a", "b", "alpha", "beta", "d0", "r0")
SWEEP_COLUMNS = PARAM_NAMES + ("final_demand", "final_resource", "max_relative_drop", "drop_count")


class UsageError(Exception):
    pass


def _float_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty grid")
    return values


def _add_trace_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trace", required=True, type=Path, help="spot-price trace file")
    p.add_argument("--format", default="auto", choices=FORMATS)
    p.add_argument("--lenient", action="store_true", help="skip malformed rows instead of failing")
    p.add_argument("--instance-type")
    p.add_argument("--os")
    p.add_argument("--zone")
    p.add_argument("--strict", action="store_true", help="reject nearly flat traces")
    p.add_argument("--flat-threshold", type=float, default=DEFAULT_FLAT_THRESHOLD)


def _add_model_args(p: argparse.ArgumentParser) -> None:
    defaults = SimParams().as_flat_dict()
    for name in PARAM_NAMES:
        p.add_argument(f"--{name.replace('_', '-')}", type=float, default=defaults[name], dest=name)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spotprey",
        description="Reconstruct spot-market demand/resource dynamics from a price trace.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the model over a trace")
    _add_trace_args(sim)
    sim.add_argument("--fixed-price", type=float, required=True, help="on-demand price in USD/hour")
    _add_model_args(sim)
    sim.add_argument("--drop-threshold", type=float, default=analysis.DEFAULT_DROP_THRESHOLD)
    sim.add_argument("--split-price", type=float, default=analysis.DEFAULT_SPLIT_PRICE)
    sim.add_argument("--out-csv", type=Path, help="series CSV (default: stdout)")
    sim.add_argument("--out-svg", type=Path)
    sim.add_argument("--out-report", type=Path, help="analysis report as JSON")
    sim.add_argument("--title", default="Demand and resource simulation")

    sweep = sub.add_parser("sweep", help="run a parameter grid over one trace")
    _add_trace_args(sweep)
    sweep.add_argument("--fixed-price", type=float, required=True)
    _add_model_args(sweep)
    for name in SWEEP_NAMES:
        sweep.add_argument(f"--sweep-{name}", type=_float_list, metavar="V1,V2,...")
    sweep.add_argument("--drop-threshold", type=float, default=analysis.DEFAULT_DROP_THRESHOLD)
    sweep.add_argument("--out-csv", type=Path, help="summary CSV (default: stdout)")

    rates = sub.add_parser("rates", help="tabulate the birth-rate curves")
    for name in ("k", "a", "b"):
        rates.add_argument(f"--{name}", type=float, default=getattr(RateParams(), name))
    rates.add_argument("--samples", type=int, default=101)
    rates.add_argument("--out-csv", type=Path)

    insp = sub.add_parser("inspect", help="trace statistics and oscillation verdict")
    _add_trace_args(insp)
    return parser


def _sim_params(args, **overrides) -> SimParams:
    values = {name: getattr(args, name) for name in PARAM_NAMES}
    values.update(overrides)
    try:
        return SimParams.from_flat(**values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(args):
    trace = parse_trace(args.trace, args.format, lenient=args.lenient)
    return filter_trace(trace, instance_type=args.instance_type, os=args.os, zone=args.zone)


def _check_fraction(name: str, value: float) -> None:
    if not 0.0 < value < 1.0:
        raise UsageError(f"{name} must lie strictly between 0 and 1, got {value}")


def _emit(outputs: list[tuple[Path | None, str]]) -> None:
    # every document is fully rendered before the first byte is written
    for path, _ in outputs:
        if path is not None and not path.parent.exists():
            raise OSError(f"output directory {path.parent} does not exist")
    for path, text in outputs:
        if path is None:
            sys.stdout.write(text)
        else:
            path.write_text(text, encoding="utf-8")


def run_simulate(args) -> int:
    params = _sim_params(args)
    if args.fixed_price <= 0:
        raise UsageError("--fixed-price must be positive")
    _check_fraction("--drop-threshold", args.drop_threshold)
    _check_fraction("--split-price", args.split_price)
    trace = _load(args)
    require_oscillation(trace, args.flat_threshold, args.strict)

    prices = transform_trace(trace, args.fixed_price)
    series = simulate(prices, params, trace.timestamps, trace.prices)
    result = analysis.analyze(series, args.drop_threshold, args.split_price)

    outputs = [(args.out_csv, report.series_csv_text(series))]
    if args.out_svg is not None:
        outputs.append((args.out_svg, report.svg_document(series, report.ChartSpec(title=args.title))))
    if args.out_report is not None:
        outputs.append((args.out_report, report.report_json_text(result)))
    _emit(outputs)
    sys.stderr.write(analysis.format_report(result))
    return EXIT_OK


def sweep_grid(args) -> list[SimParams]:
    grids = {name: getattr(args, f"sweep_{name}") for name in SWEEP_NAMES}
    if all(g is None for g in grids.values()):
        raise UsageError("sweep needs at least one --sweep-<param> grid")
    axes = [sorted(set(grids[n])) if grids[n] is not None else [getattr(args, n)] for n in SWEEP_NAMES]
    cells = []
    for combo in itertools.product(*axes):
        values = dict(zip(SWEEP_NAMES, combo))
        cells.append(_sim_params(args, **values))
    return cells


def run_sweep(args) -> int:
    if args.fixed_price <= 0:
        raise UsageError("--fixed-price must be positive")
    _check_fraction("--drop-threshold", args.drop_threshold)
    cells = sweep_grid(args)  # validates every cell before any runs
    trace = _load(args)
    require_oscillation(trace, args.flat_threshold, args.strict)
    prices = transform_trace(trace, args.fixed_price)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for params in cells:
        series = simulate(prices, params)
        drops = analysis.detect_drops(series, args.drop_threshold)
        flat = params.as_flat_dict()
        writer.writerow(
            [repr(flat[n]) for n in PARAM_NAMES]
            + [
                report.fmt_num(series.final.demand),
                report.fmt_num(series.final.resource),
                report.fmt_num(analysis.max_relative_drop(series)),
                len(drops),
            ]
        )
    _emit([(args.out_csv, buf.getvalue())])
    return EXIT_OK


def run_rates(args) -> int:
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    try:
        params = RateParams(args.k, args.a, args.b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "demand_birth_rate", "resource_birth_rate"])
    for p, f, g in dump_rate_curves(params, args.samples):
        writer.writerow([repr(float(p)), repr(float(f)), repr(float(g))])
    _emit([(args.out_csv, buf.getvalue())])
    return EXIT_OK


def run_inspect(args) -> int:
    trace = _load(args)
    stats = trace_stats(trace)
    verdict = check_oscillation(stats, args.flat_threshold, args.strict)
    payload = stats.to_dict()
    payload["verdict"] = verdict.value
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return EXIT_FLAT if verdict is Verdict.REJECTION else EXIT_OK


COMMANDS = {
    "simulate": run_simulate,
    "sweep": run_sweep,
    "rates": run_rates,
    "inspect": run_inspect,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"spotprey: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TraceParseError as exc:
        print(f"spotprey: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EmptyFilterError as exc:
        print(f"spotprey: {exc}", file=sys.stderr)
        return EXIT_EMPTY_FILTER
    except FlatTraceError as exc:
        print(f"spotprey: rejected: {exc}", file=sys.stderr)
        return EXIT_FLAT
    except OSError as exc:
        print(f"spotprey: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
