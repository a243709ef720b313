"""Command line front end: fit, goodness of fit, simulation campaigns and
breakdown-point queries.

Exit codes: 0 on success, 1 for input or usage errors, 2 when a numerical
procedure fails.
"""
from __future__ import annotations

import argparse
import csv
import sys

from .datasets import DatasetError, load_sample
from .distribution import LLParams
from .errors import EstimationError
from .estimators import (
    DEFAULT_METHODS,
    METHODS,
    PercentilePair,
    fit_method,
    percentile_breakdown,
)
from .gof import GofReport, ks_p_value, ks_statistic, qq_points
from .simulation import (
    CLEAN,
    ContaminationScenario,
    LLSource,
    PointMassSource,
    SimulationConfig,
    UniformSource,
    reproduce_table,
    run_monte_carlo,
    write_reports_csv,
    write_reports_json,
)

INPUT_ERROR = 1
NUMERICAL_ERROR = 2


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with the input-error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(INPUT_ERROR)


def _parse_methods(text: str) -> tuple:
    if text.strip() == "all":
        return DEFAULT_METHODS
    tags = tuple(tag.strip() for tag in text.split(",") if tag.strip())
    for tag in tags:
        if tag not in METHODS:
            raise DatasetError(
                f"unknown method {tag!r}; expected 'all' or a comma list "
                f"from {sorted(METHODS)}")
    if not tags:
        raise DatasetError("no methods requested")
    return tags


def _parse_scenario(text: str, fraction: float,
                    placement: str) -> ContaminationScenario:
    text = text.strip().lower()
    if text == "none":
        return CLEAN
    kind, _, args = text.partition(":")
    try:
        parts = [float(v) for v in args.split(",")] if args else []
        if kind == "ll" and len(parts) == 2:
            source = LLSource(LLParams(parts[0], parts[1]))
        elif kind == "uniform" and len(parts) == 2:
            source = UniformSource(parts[0], parts[1])
        elif kind == "pointmass" and len(parts) == 1:
            source = PointMassSource(parts[0])
        else:
            raise ValueError(f"unrecognised scenario {text!r}")
    except ValueError as exc:
        raise DatasetError(
            f"bad scenario {text!r}: {exc}; expected none, ll:A,B, "
            f"uniform:A,B or pointmass:C") from None
    return ContaminationScenario(fraction, source, placement)


def _read_config(path: str) -> dict:
    """Flat key = value file; '#' starts a comment."""
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise DatasetError(f"cannot read config {path}: {exc}") from None
    entries = {}
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        key, sep, value = text.partition("=")
        if not sep:
            raise DatasetError(
                f"{path}:{lineno}: expected 'key = value', got {text!r}")
        entries[key.strip()] = value.strip()
    return entries


def _config_to_simconfig(entries: dict, path: str,
                         seed_override=None) -> SimulationConfig:
    known = {"n", "M", "truth", "methods", "scenario", "fraction",
             "placement", "seed"}
    for key in entries:
        if key not in known:
            raise DatasetError(f"{path}: unknown config key {key!r}")

    def need(key):
        if key not in entries:
            raise DatasetError(f"{path}: missing config key {key!r}")
        return entries[key]

    def parse(key, conv, text):
        try:
            return conv(text)
        except (ValueError, TypeError) as exc:
            raise DatasetError(f"{path}: config key {key!r}: {exc}") from None

    n = parse("n", int, need("n"))
    m = parse("M", int, need("M"))
    truth_parts = parse("truth", lambda t: [float(v) for v in t.split(",")],
                        need("truth"))
    if len(truth_parts) != 2:
        raise DatasetError(f"{path}: config key 'truth' needs 'alpha,beta'")
    try:
        truth = LLParams(truth_parts[0], truth_parts[1])
    except ValueError as exc:
        raise DatasetError(f"{path}: config key 'truth': {exc}") from None
    methods = _parse_methods(entries.get("methods", "all"))
    fraction = parse("fraction", float, entries.get("fraction", "0"))
    placement = entries.get("placement", "largest")
    scenario = _parse_scenario(entries.get("scenario", "none"),
                               fraction, placement)
    seed = parse("seed", int, entries.get("seed", "0"))
    if seed_override is not None:
        seed = seed_override
    return SimulationConfig(n=n, M=m, truth=truth, methods=methods,
                            scenario=scenario, seed=seed)


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}f}"


def _diag_text(result) -> str:
    if result.method == "mle":
        return f"iters={result.iterations} score={result.score_norm:.1e}"
    if result.quantile_pair is not None:
        pair = result.quantile_pair
        return f"pair=({pair.low:g},{pair.high:g})"
    return ""


def cmd_fit(args) -> int:
    sample = load_sample(args.data)
    methods = _parse_methods(args.methods)
    rows = []
    failed = False
    for tag in methods:
        try:
            rows.append((tag, fit_method(sample, tag), None))
        except EstimationError as exc:
            rows.append((tag, None, str(exc)))
            failed = True
    width = max(len(tag) for tag in methods)
    print(f"{'method':<{width}}  {'alpha':>12}  {'beta':>12}  diagnostics")
    for tag, result, err in rows:
        if result is None:
            print(f"{tag:<{width}}  {'failed':>12}  {'':>12}  {err}")
        else:
            print(f"{tag:<{width}}  {_fmt(result.alpha, args.precision):>12}  "
                  f"{_fmt(result.beta, args.precision):>12}  {_diag_text(result)}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["method", "alpha", "beta", "iterations",
                             "score_norm", "quantile_low", "quantile_high"])
            for tag, result, err in rows:
                if result is None:
                    writer.writerow([tag, "", "", "", "", "", ""])
                    continue
                pair = result.quantile_pair
                writer.writerow([
                    tag, repr(result.alpha), repr(result.beta),
                    result.iterations if result.iterations is not None else "",
                    repr(result.score_norm) if result.score_norm is not None else "",
                    repr(pair.low) if pair else "", repr(pair.high) if pair else "",
                ])
    return NUMERICAL_ERROR if failed else 0


def cmd_gof(args) -> int:
    sample = load_sample(args.data)
    result = fit_method(sample, args.method)
    d = ks_statistic(sample, result.params)
    p = ks_p_value(d, sample.n)
    report = GofReport(method=args.method, n=sample.n, d_statistic=d, p_value=p)
    prec = args.precision
    print(f"method: {report.method} (n={report.n})")
    print(f"alpha: {_fmt(result.alpha, prec)}  beta: {_fmt(result.beta, prec)}")
    print(f"D: {_fmt(report.d_statistic, prec)}  "
          f"p-value: {_fmt(report.p_value, prec)}")
    if args.qq:
        with open(args.qq, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["theoretical", "empirical"])
            for theo, emp in qq_points(sample, result.params):
                writer.writerow([repr(theo), repr(emp)])
    return 0


def cmd_simulate(args) -> int:
    if args.table:
        reports = reproduce_table(args.table, M=args.M, seed=args.seed,
                                  jobs=args.jobs)
    elif args.config:
        cfg = _config_to_simconfig(_read_config(args.config), args.config,
                                   seed_override=args.seed
                                   if args.seed_given else None)
        cfg = SimulationConfig(n=cfg.n, M=args.M if args.M_given else cfg.M,
                               truth=cfg.truth, methods=cfg.methods,
                               scenario=cfg.scenario, seed=cfg.seed)
        reports = [run_monte_carlo(cfg, jobs=args.jobs)]
    else:
        if args.n is None or args.beta is None:
            raise DatasetError(
                "simulate needs --table, --config, or both --n and --beta")
        scenario = _parse_scenario(args.scenario, args.fraction, args.placement)
        cfg = SimulationConfig(
            n=args.n, M=args.M, truth=LLParams(args.alpha, args.beta),
            methods=_parse_methods(args.methods), scenario=scenario,
            seed=args.seed)
        reports = [run_monte_carlo(cfg, jobs=args.jobs)]
    csv_path = f"{args.out}.csv"
    json_path = f"{args.out}.json"
    write_reports_csv(reports, csv_path, precision=args.precision)
    write_reports_json(reports, json_path)
    print(f"wrote {csv_path} and {json_path} "
          f"({len(reports)} report{'s' if len(reports) != 1 else ''})")
    return 0


def cmd_breakdown(args) -> int:
    try:
        pair = PercentilePair(args.low, args.high)
    except ValueError as exc:
        raise DatasetError(str(exc)) from None
    report = percentile_breakdown(pair)
    print(f"kappa_alpha: {_fmt(report.kappa_alpha, args.precision)}")
    print(f"kappa_beta: {_fmt(report.kappa_beta, args.precision)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="llfit",
                     description="Robust log-logistic fitting toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit the distribution to data")
    fit.add_argument("--data", required=True,
                     help="file path or builtin:<name>")
    fit.add_argument("--methods", default="all",
                     help="'all' or comma list of method tags")
    fit.add_argument("--precision", type=int, default=4)
    fit.add_argument("--out", help="also write a full-precision CSV table")
    fit.set_defaults(func=cmd_fit)

    gof = sub.add_parser("gof", help="Kolmogorov-Smirnov goodness of fit")
    gof.add_argument("--data", required=True)
    gof.add_argument("--method", default="mle", choices=sorted(METHODS))
    gof.add_argument("--qq", help="write Q-Q pairs to this CSV file")
    gof.add_argument("--precision", type=int, default=4)
    gof.set_defaults(func=cmd_gof)

    sim = sub.add_parser("simulate", help="run Monte Carlo campaigns")
    sim.add_argument("--table", choices=["T1", "T2", "T3"],
                     help="reproduce a full benchmark grid")
    sim.add_argument("--config", help="flat key=value campaign file")
    sim.add_argument("--n", type=int, help="sample size (ad hoc cell)")
    sim.add_argument("--beta", type=float, help="true shape (ad hoc cell)")
    sim.add_argument("--alpha", type=float, default=1.0,
                     help="true scale (ad hoc cell)")
    sim.add_argument("--scenario", default="none",
                     help="none, ll:A,B, uniform:A,B or pointmass:C")
    sim.add_argument("--fraction", type=float, default=0.1,
                     help="contamination fraction for --scenario")
    sim.add_argument("--placement", default="largest",
                     choices=["largest", "random"])
    sim.add_argument("--methods", default="all")
    sim.add_argument("--M", type=int, default=2000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--jobs", type=int, default=1)
    sim.add_argument("--precision", type=int, default=4)
    sim.add_argument("--out", required=True, help="output path prefix")
    sim.set_defaults(func=cmd_simulate)

    brk = sub.add_parser("breakdown",
                         help="breakdown point of a percentile pair")
    brk.add_argument("low", type=float)
    brk.add_argument("high", type=float)
    brk.add_argument("--precision", type=int, default=4)
    brk.set_defaults(func=cmd_breakdown)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate":
        given = argv if argv is not None else sys.argv[1:]
        args.seed_given = any(a == "--seed" or a.startswith("--seed=")
                              for a in given)
        args.M_given = any(a == "--M" or a.startswith("--M=") for a in given)
    try:
        return args.func(args)
    except DatasetError as exc:
        print(f"llfit: input error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except EstimationError as exc:
        print(f"llfit: numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    except ValueError as exc:
        print(f"llfit: input error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
