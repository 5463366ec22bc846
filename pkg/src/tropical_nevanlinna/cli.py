"""``tropnev``: sweeps, verifier suites, equation solving and SVG plots.

Exit codes: 0 when everything checked passes, 1 when an assertable check
fails, 2 on usage, parse or parameter errors. The default tolerance can be
overridden with the ``TROPNEV_TOL`` environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .errors import BreakpointBudgetExceeded, InvalidParameters, InvalidSpec, TropicalError, WindowExceeded
from .inequalities import SmtInstance, second_main_trend, shift_quotient
from .nevanlinna import characteristic, characteristic_value, geometric_grid, proximity
from .report import DEFAULT_REL_TOL
from .special_functions import make_trig_solution
from .specs import dumps, function_from_spec, load_function, parse_json, solve_from_spec
from .suites import ALIASES, SUITES, get_suite, run_instance, random_instances, tally, worst_slack
from .svg import Series, function_samples, line_chart

TOL_ENV = "TROPNEV_TOL"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str]
    r_min: float
    r_max: float
    points: int
    geometric: bool
    tol: float | None
    seed: int
    out: Path | None
    grid_given: bool

    def radii(self) -> np.ndarray:
        if self.points < 2:
            raise UsageError("--points must be at least 2")
        if not 0 < self.r_min < self.r_max:
            raise UsageError("need 0 < --r-min < --r-max")
        if self.geometric:
            return geometric_grid(self.r_min, self.r_max, self.points)
        return np.linspace(self.r_min, self.r_max, self.points)


def _default_tol() -> float | None:
    """Tolerance from the environment; ``None`` leaves each check its own default."""
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return None
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a number") from None
    if not tol > 0:
        raise UsageError(f"{TOL_ENV} must be positive")
    return tol


def _config(args: argparse.Namespace) -> RunConfig:
    grid_given = any(getattr(args, k) is not None for k in ("r_min", "r_max", "points")) or args.geometric
    return RunConfig(
        command=args.command,
        inputs=list(getattr(args, "input", None) or []),
        r_min=0.5 if args.r_min is None else args.r_min,
        r_max=20.0 if args.r_max is None else args.r_max,
        points=40 if args.points is None else args.points,
        geometric=args.geometric,
        tol=_default_tol() if args.tol is None else args.tol,
        seed=args.seed,
        out=None if args.out is None else Path(args.out),
        grid_given=grid_given,
    )


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _single_input(cfg: RunConfig) -> str:
    if len(cfg.inputs) != 1:
        raise UsageError(f"{cfg.command} needs exactly one --input")
    return _read(cfg.inputs[0])


def _emit(cfg: RunConfig, name: str, text: str) -> None:
    """Write ``text`` to ``out/name``, or to stdout without ``--out``."""
    if cfg.out is None:
        sys.stdout.write(text)
        return
    cfg.out.mkdir(parents=True, exist_ok=True)
    (cfg.out / name).write_text(text)


def _log(cfg: RunConfig, msg: str) -> None:
    # keep stdout clean for data when no output directory is given
    print(msg, file=sys.stderr if cfg.out is None else sys.stdout)


# --------------------------------------------------------------------------
# sweep


def run_sweep(cfg: RunConfig, log_y: bool = False) -> int:
    f = load_function(_single_input(cfg))
    radii = cfg.radii()
    rows, failed = [], 0
    for r in radii:
        try:
            s = characteristic(f, float(r))
            rows.append((s.r, s.m, s.n_poles, s.N, s.T))
        except (WindowExceeded, BreakpointBudgetExceeded) as exc:
            failed += 1
            print(f"r={r!r}: {type(exc).__name__}: {exc}", file=sys.stderr)
            rows.append((float(r), math.nan, math.nan, math.nan, math.nan))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "m", "n", "N", "T"])
    for row in rows:
        writer.writerow([repr(float(v)) for v in row])
    _emit(cfg, "sweep.csv", buf.getvalue())

    if cfg.out is not None:
        x, y = function_samples(f, -cfg.r_max, cfg.r_max)
        _emit(cfg, "function.svg", line_chart([Series(x, y, "f")], "f(x)", "x", "f"))
        T = [row[4] for row in rows]
        _emit(cfg, "characteristic.svg", line_chart([Series(radii, T, "T(r, f)")], "characteristic", "r", "T", log_y=log_y))
        _log(cfg, f"sweep: {len(rows)} radii written to {cfg.out}")
    return 1 if failed else 0


# --------------------------------------------------------------------------
# verify


def _instances_from_inputs(cfg: RunConfig) -> list[dict]:
    out = []
    for path in cfg.inputs:
        data = parse_json(_read(path))
        items = data if isinstance(data, list) else [data]
        for item in items:
            if not isinstance(item, dict):
                raise InvalidSpec(f"{path}: each instance must be an object")
            out.append(item)
    return out


def run_verify(cfg: RunConfig, theorem: str, n_random: int | None, corrected: bool) -> int:
    names = sorted(SUITES) if theorem == "all" else [get_suite(theorem).theorem_id]
    if theorem == "all" and cfg.inputs:
        raise UsageError("'verify all' only works with --random")
    if n_random is None and not cfg.inputs:
        raise UsageError("verify needs --input FILE or --random N")
    if n_random is not None and n_random < 1:
        raise UsageError("--random must be positive")
    grid = cfg.radii() if cfg.grid_given else None
    any_failed = False
    documents = {}
    for name in names:
        suite = SUITES[name]
        if corrected and not suite.has_corrected and theorem != "all":
            raise UsageError(f"{name} has no corrected variant")
        insts = _instances_from_inputs(cfg) if cfg.inputs else random_instances(suite, n_random, cfg.seed, grid)
        if grid is not None and cfg.inputs:
            insts = [{**inst, "radii": grid.tolist()} for inst in insts]
        outcomes = [run_instance(suite, inst, i, cfg.tol, corrected and suite.has_corrected) for i, inst in enumerate(insts)]
        counts = tally(outcomes)
        any_failed |= counts["failed"] > 0
        documents[name] = {
            "theorem_id": name,
            "corrected": bool(corrected and suite.has_corrected),
            "seed": cfg.seed if not cfg.inputs else None,
            "summary": counts,
            "reports": [o.to_json() for o in outcomes],
        }
        label = name + (" (corrected)" if corrected and suite.has_corrected else "")
        line = f"{label}: {counts['passed']}/{counts['total']} pass, {counts['failed']} fail, {counts['skipped']} skip"
        slack = worst_slack(outcomes)
        if not math.isnan(slack):
            line += f", worst slack {slack:.6g}"
        _log(cfg, line)
        for o in outcomes:
            if o.report is None:
                _log(cfg, f"  skip #{o.index}: {o.skipped}")
    if cfg.out is None:
        payload = documents[names[0]] if len(names) == 1 else documents
        sys.stdout.write(dumps(payload))
    else:
        for name, doc in documents.items():
            _emit(cfg, f"verify-{name}.json", dumps(doc))
    return 1 if any_failed else 0


# --------------------------------------------------------------------------
# solve


def run_solve(cfg: RunConfig, window: float) -> int:
    eq = parse_json(_single_input(cfg))
    sol = solve_from_spec(eq)
    res, sup = sol.residual(-window, window)
    tol = DEFAULT_REL_TOL if cfg.tol is None else cfg.tol
    ok = res <= tol * max(1.0, sup)
    doc = sol.to_json()
    doc["residual"] = {"window": [-window, window], "max_abs": res, "sup_abs_y": sup, "tol": tol, "pass": ok}
    _emit(cfg, "solution.json", dumps(doc))
    if cfg.out is not None:
        _emit(cfg, "solution.svg", _solution_svg(sol))
    _log(cfg, f"solve: residual {res:.3g} (sup|y| {sup:.3g}) {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


def _solution_svg(sol) -> str:
    c = sol.equation["c"]
    lo, hi = (-3.0, 6.0) if sol.equation["order"] == 2 and abs(c) < 2 else (-4.0, 4.0)
    x, y = function_samples(sol.assembled, lo, hi)
    series = []
    if sol.equation["order"] == 2 and abs(c) < 2:
        theta = math.acos(c / 2.0)
        for which, color in ((1, "#d62728"), (2, "#2ca02c")):
            g = make_trig_solution(theta, which)
            gx, gy = function_samples(g, lo, hi)
            series.append(Series(gx, gy, f"y{which}", color))
    series.append(Series(x, y, "solution", "#1f77b4"))
    return line_chart(series, f"order {sol.equation['order']}, c = {c:g}", "x", "y")


# --------------------------------------------------------------------------
# plot


def run_plot(cfg: RunConfig, what: str, log_y: bool) -> int:
    text = _single_input(cfg)
    radii = cfg.radii()
    if what == "function":
        f = load_function(text)
        x, y = function_samples(f, -cfg.r_max, cfg.r_max)
        svg = line_chart([Series(x, y, "f")], "f(x)", "x", "f")
    elif what == "characteristic":
        f = load_function(text)
        svg = line_chart(
            [
                Series(radii, characteristic_value(f, radii), "T(r, f)"),
                Series(radii, proximity(f, radii), "m(r, f)", dashed=True),
            ],
            "characteristic and proximity",
            "r",
            "T",
            log_y=log_y,
        )
    elif what == "smt-trend":
        inst = parse_json(text)
        smt = SmtInstance(function_from_spec(inst["f"]), float(inst["c"]), [float(a) for a in inst["targets"]], float(radii.max()))
        t = second_main_trend(smt, radii)
        svg = line_chart(
            [Series(radii, t["difference"], "qT - sum N(-max(f,a)) + N(-f)"), Series(radii, t["T"], "T(r, f)", dashed=True)],
            "second main theorem trend (no verdict)",
            "r",
            "value",
            log_y=log_y,
        )
    elif what == "shift-trend":
        f = load_function(text)
        ratio = proximity(shift_quotient(f, 1.0), radii) / np.maximum(characteristic_value(f, radii), 1e-300)
        svg = line_chart([Series(radii, ratio, "m(r, f(x+1) - f(x)) / T(r, f)")], "shift quotient trend (no verdict)", "r", "ratio", log_y=log_y)
    else:
        raise UsageError(f"unknown plot {what!r}")
    _emit(cfg, f"{what}.svg", svg)
    return 0


# --------------------------------------------------------------------------
# argument parsing


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r-min", type=_positive_float, help="smallest radius (default 0.5)")
    common.add_argument("--r-max", type=_positive_float, help="largest radius (default 20)")
    common.add_argument("--points", type=int, help="number of radii (default 40)")
    common.add_argument("--geometric", action="store_true", help="geometric instead of linear radius grid")
    common.add_argument("--tol", type=_positive_float, help=f"relative tolerance (default ${TOL_ENV} or {DEFAULT_REL_TOL})")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--out", help="output directory (default: stdout)")

    parser = argparse.ArgumentParser(prog="tropnev", description="Tropical Nevanlinna theory for piecewise-linear functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", parents=[common], help="tabulate r, m, n, N, T for a function spec")
    p.add_argument("--input", action="append", required=True, help="function spec JSON ('-' for stdin)")
    p.add_argument("--log-y", action="store_true", help="log scale for the T(r) plot")

    p = sub.add_parser("verify", parents=[common], help="run a verifier suite")
    ids = sorted(SUITES) + sorted(ALIASES) + ["all"]
    p.add_argument("theorem", metavar="THEOREM", help="one of: " + ", ".join(ids))
    p.add_argument("--input", action="append", help="instance JSON (object or list); may repeat")
    p.add_argument("--random", type=int, metavar="N", help="run N seeded random instances")
    p.add_argument("--corrected", action="store_true", help="use the corrected bound where one exists")

    p = sub.add_parser("solve", parents=[common], help="solve an ultra-discrete equation spec")
    p.add_argument("--input", action="append", required=True, help="equation spec JSON")
    p.add_argument("--window", type=_positive_float, default=20.0, help="residual window [-W, W] (default 20)")

    p = sub.add_parser("plot", parents=[common], help="SVG plots of functions and trends")
    p.add_argument("what", choices=["function", "characteristic", "smt-trend", "shift-trend"])
    p.add_argument("--input", action="append", required=True, help="function or instance spec JSON")
    p.add_argument("--log-y", action="store_true", help="log scale on the y axis")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        if args.command == "sweep":
            return run_sweep(cfg, args.log_y)
        if args.command == "verify":
            return run_verify(cfg, args.theorem, args.random, args.corrected)
        if args.command == "solve":
            return run_solve(cfg, args.window)
        return run_plot(cfg, args.what, args.log_y)
    except (UsageError, InvalidSpec, InvalidParameters) as exc:
        print(f"tropnev: error: {exc}", file=sys.stderr)
        return 2
    except TropicalError as exc:
        print(f"tropnev: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
