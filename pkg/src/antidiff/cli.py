"""Command-line interface.

Subcommands: ``simulate`` runs one experiment from a JSON config and/or
flags, ``classify`` prints every applicable report for a saved state,
``verify`` runs the randomized property suites, ``figures`` reproduces one
of the built-in experiment presets as CSV files.

Exit codes: 0 success, 1 property violation, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis, verify
from .experiments import ExperimentConfig, METRICS, figures_run, run_experiment
from .scalars import BINARY64, RATIONAL
from .state import GridState


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="antidiff")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one experiment and write CSV")
    sim.add_argument("--config", help="JSON config file; flags override it")
    sim.add_argument("--scheme", choices=("upwind", "lax_wendroff", "dl_fixed",
                                          "dl_shifted"))
    sim.add_argument("--lambda", dest="lam", metavar="P/Q",
                     help="CFL number as an exact ratio, e.g. 2/5")
    sim.add_argument("--arith", choices=(RATIONAL, BINARY64))
    sim.add_argument("--steps", type=int)
    sim.add_argument("--initial", help="preset name or inline JSON spec")
    sim.add_argument("--M", type=int, help="cell count for datum presets")
    sim.add_argument("--metrics", help="comma-separated subset of: "
                                       + ",".join(METRICS))
    sim.add_argument("--out", help="CSV output path")
    sim.add_argument("--stride", type=int, default=None)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--dump-reconstruction", action="store_true", default=None)
    sim.add_argument("--exact-columns", action="store_true", default=None)

    cla = sub.add_parser("classify", help="print all applicable reports for a state")
    cla.add_argument("state", help="path to a state JSON file")
    cla.add_argument("--alpha", default="0", help="inner-jump threshold (exact ratio)")

    ver = sub.add_parser("verify", help="run the randomized property suites")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--cases", type=int, default=200)

    fig = sub.add_parser("figures", help="run a built-in experiment preset")
    fig.add_argument("name", choices=("castest1", "fsin", "fsinstag", "escalier",
                                      "fiveconfig"))
    fig.add_argument("--out", required=True, help="output directory")
    fig.add_argument("--M", type=int, default=None)
    fig.add_argument("--steps", type=int, default=None,
                     help="override the preset step count")
    fig.add_argument("--stride", type=int, default=1)
    return parser


def _cmd_simulate(args) -> int:
    raw = {}
    if args.config:
        raw = json.loads(Path(args.config).read_text())
    overrides = {
        "scheme": args.scheme,
        "lambda": args.lam,
        "arithmetic": args.arith,
        "n_steps": args.steps,
        "M": args.M,
        "stride": args.stride,
        "seed": args.seed,
        "dump_reconstruction": args.dump_reconstruction,
        "exact_columns": args.exact_columns,
    }
    if args.initial is not None:
        text = args.initial
        overrides["initial"] = json.loads(text) if text.lstrip().startswith("{") else text
    if args.metrics is not None:
        overrides["metrics"] = [m for m in args.metrics.split(",") if m]
    for key, value in overrides.items():
        if value is not None:
            raw[key] = value
    raw.setdefault("stride", 1)
    missing = [k for k in ("scheme", "lambda", "arithmetic", "initial", "n_steps")
               if raw.get(k) is None]
    if missing:
        print(f"missing required settings: {', '.join(missing)}", file=sys.stderr)
        return 2
    config = ExperimentConfig.from_dict(raw, out=args.out or raw.get("out"))
    series = run_experiment(config)
    if config.out:
        print(config.out)
    else:
        sys.stdout.write(series.csv_text())
    return 0


def _fmt(value) -> str:
    return str(value)


def _cmd_classify(args) -> int:
    state = GridState.from_json(Path(args.state).read_text())
    alpha = Fraction(args.alpha) if state.mode == RATIONAL else float(Fraction(args.alpha))
    print(f"kind: {state.kind}  phase: {state.phase}  mode: {state.mode}  "
          f"lambda: {state.lam}")
    print(f"nondecreasing: {state.is_nondecreasing()}")
    print(f"total_variation: {_fmt(state.total_variation())}")

    report = analysis.classify_H_alpha(state, alpha)
    if report is None:
        print("monotone M-jump configuration: no")
    else:
        print(f"monotone M-jump configuration: M={report.M} j0={report.j0} "
              f"min_inner_jump={_fmt(report.min_inner_jump)} "
              f"alpha={_fmt(report.alpha)} alpha_satisfied={report.alpha_satisfied}")
        print(f"extremity class: {analysis.classify_extremities(state)}")

    j_inf = analysis.is_discrete_heaviside(state)
    print("discrete heaviside: " + (f"j_inf={j_inf}" if j_inf is not None else "no"))

    stairs = analysis.check_Hprime(state)
    if stairs.satisfies_hprime:
        print(f"staircase: front=({_fmt(stairs.s_half)}, {_fmt(stairs.s_three_half)}) "
              f"case=({stairs.case}) front_sum={_fmt(stairs.front_sum)} "
              f"front_start={stairs.front_start}")
    else:
        print(f"staircase: no ({stairs.reason})")

    try:
        five = analysis.check_five_config_conditions(state, state.lam)
        conds = ",".join("ok" if c else "FAIL" for c in five.conditions)
        print(f"five-configuration: epsilon={_fmt(five.epsilon)} conditions=[{conds}] "
              f"limits=({', '.join(_fmt(v) for v in five.limits)})")
    except ValueError as exc:
        print(f"five-configuration: no ({exc})")
    return 0


def _cmd_verify(args) -> int:
    results = verify.run_all(args.seed, args.cases)
    width = max(len(r.name) for r in results)
    failed = False
    for r in results:
        status = "ok" if r.ok else "FAIL"
        line = f"{r.name:<{width}}  cases={r.cases:<5d} violations={r.violations:<3d} {status}"
        if r.detail:
            line += f"  [{r.detail}]"
        print(line)
        failed = failed or not r.ok
    return 1 if failed else 0


def _cmd_figures(args) -> int:
    paths = figures_run(args.name, args.out, M=args.M, steps=args.steps,
                        stride=args.stride)
    for p in paths:
        print(p)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "figures":
            return _cmd_figures(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
