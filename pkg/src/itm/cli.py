"""Command-line front end.

Subcommands:

* ``solve``    -- run the iterative transformation solve and emit the
  iteration trace plus the converged root.
* ``scan``     -- sample gamma over an h* grid and report brackets and the
  existence/uniqueness verdict.
* ``sweep``    -- beta continuation for the Falkner-Skan model.
* ``beta-min`` -- bisect for the smallest solvable beta.

Output formats: ``csv`` (header row, LF, UTF-8), ``json`` (one top-level
object), ``pretty`` (6-decimal tables).  Exit codes: 0 success, 1 usage or
configuration error, 2 clean non-convergence (the result is still
emitted).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .continuation import find_beta_min, sweep_beta
from .core import RootCriteria, solve
from .errors import DegenerateSecant, EvaluationError, SweepSeedFailure
from .existence import scan_gamma
from .integrator import Tolerances
from .problems import falkner_skan, sakiadis

__all__ = ["main"]

SOLVE_COLUMNS = ["j", "h_star", "lambda", "gamma", "missing_ic"]
SCAN_COLUMNS = ["h_star", "gamma", "status"]
SWEEP_COLUMNS = ["beta", "branch", "h_star", "missing_ic", "iterations",
                 "converged"]
BETA_MIN_COLUMNS = ["beta_min", "bracket_width", "witness"]


class CliError(Exception):
    """Usage/config problem; `code` is a stable machine-greppable token."""

    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.6f}" if abs(x) >= 1e-4 or x == 0 else f"{x:.6e}"
    return str(x)


def _parse_sign(token):
    try:
        s = int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"sign must be +1 or -1, got {token!r}")
    if s not in (1, -1):
        raise argparse.ArgumentTypeError(
            f"sign must be +1 or -1, got {token!r}")
    return s


def _parse_grid(token):
    """Grid syntax lo:hi:count (linear) or lo:hi:countL (log-spaced)."""
    log = token.endswith(("L", "l"))
    body = token[:-1] if log else token
    parts = body.split(":")
    if len(parts) != 3:
        raise CliError("bad-grid-token", f"malformed grid token {token!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise CliError("bad-grid-token", f"malformed grid token {token!r}")
    if count < 2 or not 0 < lo < hi:
        raise CliError("bad-grid-token",
                       f"grid token {token!r} needs 0 < lo < hi and count >= 2")
    if log:
        return list(np.geomspace(lo, hi, count))
    return list(np.linspace(lo, hi, count))


def _parse_betas(token):
    """Beta range syntax start:stop:step (step sign must point at stop)."""
    parts = token.split(":")
    if len(parts) != 3:
        raise CliError("bad-beta-token", f"malformed beta token {token!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise CliError("bad-beta-token", f"malformed beta token {token!r}")
    if step == 0 or (stop - start) * step < 0:
        raise CliError("bad-beta-token",
                       f"beta token {token!r} has a step of the wrong sign")
    n = int(round((stop - start) / step))
    values = [start + i * step for i in range(n + 1)]
    return values


def _build_problem(args):
    name = args.problem
    if name == "sakiadis":
        eta_inf = args.eta_inf if args.eta_inf is not None else 10.0
        return sakiadis(args.sign, truncated_boundary=eta_inf)
    if name in ("falkner-skan", "blasius"):
        beta = 0.0 if name == "blasius" else args.beta
        eta_inf = args.eta_inf if args.eta_inf is not None else 20.0
        return falkner_skan(beta, args.sign, truncated_boundary=eta_inf)
    raise CliError("bad-problem", f"unknown problem {name!r}")


def _tolerances(args):
    return Tolerances(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _criteria(args):
    return RootCriteria(tol_gamma=args.tol_gamma, tol_rel=args.tol_r,
                        tol_abs=args.tol_a, max_iters=args.max_iters)


def _write_csv(stream, columns, rows):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def _emit(args, columns, rows, payload, pretty_lines):
    if args.format == "csv":
        buf = io.StringIO()
        _write_csv(buf, columns, rows)
        text = buf.getvalue()
    elif args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = "\n".join(pretty_lines) + "\n"
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        except OSError as exc:
            raise CliError("unwritable-output", f"cannot write {args.output}: {exc}")
    else:
        sys.stdout.write(text)


def _solution_payload(args, sol):
    return {
        "command": "solve",
        "problem": args.problem,
        "beta": 0.0 if args.problem == "blasius" else args.beta,
        "sign": args.sign,
        "converged": sol.converged,
        "h_star_root": sol.h_star_root,
        "lambda": sol.lam,
        "missing_ic": sol.missing_ic,
        "iterations": [
            {"j": j, "h_star": h, "lambda": lam, "gamma": g, "missing_ic": m}
            for j, h, lam, g, m in sol.iterations
        ],
        "profile": (None if sol.profile is None
                    else [list(row) for row in sol.profile.points]),
    }


def _cmd_solve(args):
    problem = _build_problem(args)
    try:
        sol = solve(problem, args.h0, args.h1, _criteria(args),
                    _tolerances(args))
    except (DegenerateSecant, EvaluationError) as exc:
        reason = ("degenerate-secant" if isinstance(exc, DegenerateSecant)
                  else "evaluation-budget")
        payload = {
            "command": "solve", "problem": args.problem,
            "beta": 0.0 if args.problem == "blasius" else args.beta,
            "sign": args.sign, "converged": False,
            "h_star_root": None, "lambda": None, "missing_ic": None,
            "iterations": [], "profile": None,
            "failure": f"{reason}: {exc}",
        }
        _emit(args, SOLVE_COLUMNS, [], payload,
              [f"not converged ({reason}: {exc})"])
        print(f"nonconverged: {reason}", file=sys.stderr)
        return 2
    rows = list(sol.iterations)
    pretty = ["   j      h_star      lambda       gamma  missing_ic"]
    for j, h, lam, g, m in sol.iterations:
        pretty.append(
            f"{j:4d}  {h:10.6f}  {_fmt(lam):>10}  {g:10.6f}  {_fmt(m):>10}"
        )
    if sol.converged:
        pretty.append(
            f"converged: h*={sol.h_star_root:.6f} lambda={sol.lam:.6f} "
            f"missing_ic={sol.missing_ic:.6f}"
        )
    else:
        pretty.append("not converged (max iterations reached)")
    _emit(args, SOLVE_COLUMNS, rows, _solution_payload(args, sol), pretty)
    if not sol.converged:
        print("nonconverged: max-iters", file=sys.stderr)
        return 2
    return 0


def _cmd_scan(args):
    problem = _build_problem(args)
    grid = _parse_grid(args.grid)
    report = scan_gamma(problem, grid, _tolerances(args),
                        workers=args.workers)
    rows = [(s.h_star, s.gamma, s.status.value) for s in report.samples]
    payload = {
        "command": "scan",
        "problem": args.problem,
        "beta": 0.0 if args.problem == "blasius" else args.beta,
        "sign": args.sign,
        "samples": [
            {"h_star": s.h_star, "gamma": s.gamma, "status": s.status.value}
            for s in report.samples
        ],
        "brackets": [list(b) for b in report.brackets],
        "zero_count_lower_bound": report.zero_count_lower_bound,
        "verdict": report.verdict.value,
        "sensitivity": [
            {"root_estimate": r, "slope": sl, "well_conditioned": w}
            for r, sl, w in report.sensitivity
        ],
    }
    pretty = ["      h_star       gamma  status"]
    for s in report.samples:
        pretty.append(f"{s.h_star:12.6f}  {s.gamma:10.6f}  {s.status.value}")
    pretty.append(f"brackets: {report.brackets}")
    pretty.append(f"verdict: {report.verdict.value}")
    _emit(args, SCAN_COLUMNS, rows, payload, pretty)
    return 0


def _cmd_sweep(args):
    betas = _parse_betas(args.betas)
    try:
        path = sweep_beta(betas, args.sign, (args.h0, args.h1),
                          _criteria(args), _tolerances(args),
                          truncated_boundary=(args.eta_inf or 20.0))
    except SweepSeedFailure as exc:
        raise CliError("sweep-seed-failure", str(exc))
    rows = [(e.beta, e.branch, e.h_star_root, e.missing_ic, e.iterations,
             e.converged) for e in path.entries]
    payload = {
        "command": "sweep",
        "sign": args.sign,
        "entries": [
            {"beta": e.beta, "branch": e.branch, "h_star": e.h_star_root,
             "missing_ic": e.missing_ic, "iterations": e.iterations,
             "converged": e.converged}
            for e in path.entries
        ],
    }
    pretty = ["      beta  branch      h_star  missing_ic  iters  converged"]
    for e in path.entries:
        pretty.append(
            f"{e.beta:10.6f}  {e.branch:+6d}  {_fmt(e.h_star_root):>10}  "
            f"{_fmt(e.missing_ic):>10}  {e.iterations:5d}  {e.converged}"
        )
    _emit(args, SWEEP_COLUMNS, rows, payload, pretty)
    if any(not e.converged for e in path.entries):
        print("nonconverged: sweep-entry", file=sys.stderr)
        return 2
    return 0


def _cmd_beta_min(args):
    parts = args.bracket.split(":")
    if len(parts) != 2:
        raise CliError("bad-bracket-token",
                       f"malformed bracket token {args.bracket!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise CliError("bad-bracket-token",
                       f"malformed bracket token {args.bracket!r}")
    try:
        est = find_beta_min(args.sign, (args.h0, args.h1), (lo, hi),
                            args.width_tol, _criteria(args),
                            _tolerances(args),
                            truncated_boundary=(args.eta_inf or 20.0))
    except ValueError as exc:
        raise CliError("bad-beta-bracket", str(exc))
    rows = [(est.beta_min, est.bracket_width, est.witness)]
    payload = {
        "command": "beta-min",
        "beta_min": est.beta_min,
        "bracket_width": est.bracket_width,
        "witness": est.witness,
        "last_converged": (None if est.last_converged is None else {
            "beta": est.last_converged.beta,
            "h_star": est.last_converged.h_star_root,
            "missing_ic": est.last_converged.missing_ic,
        }),
    }
    pretty = [
        f"beta_min = {est.beta_min:.6f} (bracket width {est.bracket_width:.2e})",
        f"witness: {est.witness}",
    ]
    _emit(args, BETA_MIN_COLUMNS, rows, payload, pretty)
    return 0


def _add_common(sub):
    sub.add_argument("--format", choices=("csv", "json", "pretty"),
                     default="pretty")
    sub.add_argument("--output", default=None)
    sub.add_argument("--rel-tol", type=float, default=1e-6)
    sub.add_argument("--abs-tol", type=float, default=1e-6)
    sub.add_argument("--eta-inf", type=float, default=None,
                     help="override the truncated boundary")


def _add_problem(sub):
    sub.add_argument("--problem",
                     choices=("sakiadis", "falkner-skan", "blasius"),
                     required=True)
    sub.add_argument("--beta", type=float, default=0.0)
    sub.add_argument("--sign", type=_parse_sign, default=-1)


def _add_criteria(sub, tol_gamma_default):
    sub.add_argument("--tol-gamma", type=float, default=tol_gamma_default)
    sub.add_argument("--tol-r", type=float, default=1e-6)
    sub.add_argument("--tol-a", type=float, default=1e-6)
    sub.add_argument("--max-iters", type=int, default=50)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="itm",
        description="Iterative transformation method for third-order BVPs "
                    "on semi-infinite intervals",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_solve = subs.add_parser("solve", help="run the ITM solve")
    _add_problem(p_solve)
    p_solve.add_argument("--h0", type=float, required=True)
    p_solve.add_argument("--h1", type=float, required=True)
    _add_criteria(p_solve, 1e-6)
    _add_common(p_solve)

    p_scan = subs.add_parser("scan", help="sample gamma over an h* grid")
    _add_problem(p_scan)
    p_scan.add_argument("--grid", required=True,
                        help="lo:hi:count (linear) or lo:hi:countL (log)")
    p_scan.add_argument("--workers", type=int, default=None)
    _add_common(p_scan)

    p_sweep = subs.add_parser("sweep", help="beta continuation sweep")
    p_sweep.add_argument("--problem", choices=("falkner-skan",),
                         default="falkner-skan")
    p_sweep.add_argument("--sign", type=_parse_sign, required=True)
    p_sweep.add_argument("--betas", required=True, help="start:stop:step")
    p_sweep.add_argument("--h0", type=float, required=True)
    p_sweep.add_argument("--h1", type=float, required=True)
    _add_criteria(p_sweep, 1e-6)
    _add_common(p_sweep)

    p_bm = subs.add_parser("beta-min", help="bisect for the smallest "
                                            "solvable beta")
    p_bm.add_argument("--sign", type=_parse_sign, default=1)
    p_bm.add_argument("--bracket", required=True, help="beta_lo:beta_hi")
    p_bm.add_argument("--width-tol", type=float, default=5e-4)
    p_bm.add_argument("--h0", type=float, default=1.0)
    p_bm.add_argument("--h1", type=float, default=5.0)
    _add_criteria(p_bm, 1e-6)
    _add_common(p_bm)

    return parser


_COMMANDS = {
    "solve": _cmd_solve,
    "scan": _cmd_scan,
    "sweep": _cmd_sweep,
    "beta-min": _cmd_beta_min,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, EvaluationError) as exc:
        print(f"error: invalid-config: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
