"""Command line front end.

Exit codes: 0 success, 2 usage error, 3 bad input data, 4 numerical failure.
"""

import argparse
import csv
import io as _io
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .backward_error import backward_error_bounds
from .conditioning import condition_numbers
from .errors import DataError, NumericalError
from .estimators import pce_condition_numbers, sce_condition_numbers
from .experiments import (TABLE1, TABLE1_FIELDS, TABLE1_GRID, reference_problem,
                          ratio_csv, run_ratio_benchmark, run_table1)
from .model import PgcsProblem, ToleranceSet, default_tolerances, residual
from .perturbation import componentwise_bounds, normwise_bounds
from .solver import factorize_problem, solve_pgcs

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 0, 2, 3, 4

class UsageError(Exception):
    pass


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pgcs",
        description="Solve periodic generalized coupled Sylvester equations and "
                    "analyse their sensitivity.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text, inputs=True):
        p = sub.add_parser(name, help=help_text)
        if inputs:
            p.add_argument("--input", help="problem JSON file")
        p.add_argument("--output", help="output file (default: standard output)")
        return p

    add("solve", "solve the equation and write the solution")
    p = add("residual", "residuals of a candidate solution")
    p.add_argument("--candidate", help="candidate solution JSON")
    for name, text in (("backward-error", "backward error bounds of a candidate"),
                       ("bounds", "perturbation bounds for a data perturbation"),
                       ("cond", "exact condition numbers"),
                       ("estimate", "estimated condition numbers")):
        p = add(name, text)
        p.add_argument("--tolerances", default="default",
                       help="'default' (Frobenius norms), 'unit', or a JSON file")
        if name == "backward-error":
            p.add_argument("--candidate", help="candidate solution JSON")
        if name == "bounds":
            p.add_argument("--perturbation", help="perturbation JSON")
            p.add_argument("--seed", type=int, default=0)
        if name in ("cond", "estimate"):
            p.add_argument("--tau", type=int, choices=(1, 3, 5))
            p.add_argument("--t", type=int, choices=(1, 3, 5))
        if name == "estimate":
            p.add_argument("--estimator", choices=("pce", "sce", "exact"), default="pce")
            p.add_argument("--samples", type=int, default=3)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--eps-prob", type=float, default=1e-3)
            p.add_argument("--delta-gap", type=float, default=1e-2)

    p = add("bench-table1", "condition numbers over the (tau, t) grid", inputs=False)
    p.add_argument("--tau", type=int, choices=(1, 3, 5))
    p.add_argument("--t", type=int, choices=(1, 3, 5))
    p = add("bench-ratios", "estimator-to-exact ratios over random problems", inputs=False)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps-prob", type=float, default=1e-3)
    p.add_argument("--delta-gap", type=float, default=1e-2)
    p.add_argument("--workers", type=int, default=1)
    return parser


def _require(args, *names):
    missing = ["--" + n.replace("_", "-") for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"{args.command} requires " + ", ".join(missing))


def _emit(text, path):
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n")


def _emit_json(obj, path):
    _emit(io.dumps(obj), path)


def _substitute(problem, tau, t):
    # B_p(2,2) = 10^-t and D_p(2,2) = 10^-tau in the last period
    if problem.n < 2:
        raise DataError("--tau/--t need n >= 2")
    B, D = list(problem.B), list(problem.D)
    B[-1], D[-1] = B[-1].copy(), D[-1].copy()
    if t is not None:
        B[-1][1, 1] = 10.0 ** -t
    if tau is not None:
        D[-1][1, 1] = 10.0 ** -tau
    return PgcsProblem(problem.p, problem.m, problem.n, problem.A, tuple(B),
                       problem.C, tuple(D), problem.E, problem.F)


def _problem(args):
    grid = getattr(args, "tau", None) is not None or getattr(args, "t", None) is not None
    if args.input is None:
        if not grid:
            raise UsageError(f"{args.command} requires --input")
        return reference_problem(args.tau or 1, args.t or 1), True
    problem = io.load_problem(args.input)
    if grid:
        problem = _substitute(problem, args.tau, args.t)
    return problem, grid


def _tolerances(args, problem, grid_mode):
    choice = getattr(args, "tolerances", "default")
    if choice == "unit" or (choice == "default" and grid_mode):
        return ToleranceSet.unit(problem.p)
    if choice == "default":
        return default_tolerances(problem)
    return io.load_tolerances(choice, problem.p)


def cmd_solve(args):
    problem, _ = _problem(args)
    _emit_json(solve_pgcs(problem), args.output)


def cmd_residual(args):
    _require(args, "candidate")
    problem, _ = _problem(args)
    res = residual(problem, io.load_solution(args.candidate))
    out = io.to_jsonable(res)
    out["max_abs"] = res.max_abs()
    _emit_json(out, args.output)


def cmd_backward_error(args):
    _require(args, "candidate")
    problem, grid = _problem(args)
    rep = backward_error_bounds(problem, io.load_solution(args.candidate),
                                _tolerances(args, problem, grid))
    _emit_json(rep, args.output)


def cmd_bounds(args):
    _require(args, "perturbation")
    problem, grid = _problem(args)
    delta = io.load_perturbation(args.perturbation)
    tol = _tolerances(args, problem, grid)
    fac = factorize_problem(problem)
    sol = solve_pgcs(problem, fac)
    _emit_json({"normwise": normwise_bounds(problem, sol, delta, tol, fac, seed=args.seed),
                "componentwise": componentwise_bounds(problem, sol, delta, tol, fac)},
               args.output)


def cmd_cond(args):
    problem, grid = _problem(args)
    rep = condition_numbers(problem, tolerances=_tolerances(args, problem, grid))
    out = rep.as_dict()
    out["methods"] = rep.methods
    _emit_json(out, args.output)


def cmd_estimate(args):
    problem, grid = _problem(args)
    tol = _tolerances(args, problem, grid)
    fac = factorize_problem(problem)
    sol = solve_pgcs(problem, fac)
    if args.estimator == "exact":
        out = condition_numbers(problem, sol, tol, fac).as_dict()
    elif args.estimator == "pce":
        res = pce_condition_numbers(problem, sol, tol, args.eps_prob, args.delta_gap,
                                    args.seed, fac)
        out = {"k_N1": res.k_N1, "k_E": res.k_E,
               "sensitivity": res.sensitivity, "inverse": res.inverse}
    else:
        res = sce_condition_numbers(problem, sol, args.samples, args.seed, fac)
        out = {"mixed": res.mixed_est, "componentwise": res.componentwise_est,
               "samples": res.samples, "seed": res.seed}
    out["estimator"] = args.estimator
    _emit_json(out, args.output)


def _summary_path(output):
    return None if output is None else str(Path(output).with_suffix(".summary.json"))


def cmd_bench_table1(args):
    grid = [(tau, t) for tau, t in TABLE1_GRID
            if (args.tau is None or tau == args.tau) and (args.t is None or t == args.t)]
    if not grid:
        raise UsageError(f"no grid point matches; the grid is {TABLE1_GRID}")
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tau", "t"] + list(TABLE1_FIELDS)
               + [f + "_ref" for f in TABLE1_FIELDS] + ["max_rel_err"])
    worst = 0.0
    for tau, t in grid:
        got = run_table1(tau, t).as_dict()
        vals = [got[f] for f in TABLE1_FIELDS]
        err = max(abs(v / r - 1.0) for v, r in zip(vals, TABLE1[tau, t]))
        worst = max(worst, err)
        w.writerow([tau, t] + [repr(v) for v in vals] + list(TABLE1[tau, t]) + [repr(err)])
    _emit(buf.getvalue(), args.output)
    summary = {"points": len(grid), "max_rel_err": worst, "within_1e-3": worst <= 1e-3}
    _write_summary(summary, args.output)


def _write_summary(summary, output):
    path = _summary_path(output)
    if path is None:
        sys.stderr.write(json.dumps(summary) + "\n")
    else:
        _emit_json(summary, path)


def cmd_bench_ratios(args):
    if args.trials < 1 or args.samples < 1:
        raise UsageError("--trials and --samples must be positive")
    stats = run_ratio_benchmark(args.trials, args.samples, args.seed, args.eps_prob,
                                args.delta_gap, workers=args.workers)
    _emit(ratio_csv(stats), args.output)
    _write_summary(stats.summary(), args.output)


HANDLERS = {
    "solve": cmd_solve,
    "residual": cmd_residual,
    "backward-error": cmd_backward_error,
    "bounds": cmd_bounds,
    "cond": cmd_cond,
    "estimate": cmd_estimate,
    "bench-table1": cmd_bench_table1,
    "bench-ratios": cmd_bench_ratios,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    np.seterr(all="ignore")
    try:
        HANDLERS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"pgcs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"pgcs: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"pgcs: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
