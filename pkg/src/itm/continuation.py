"""Parameter continuation in beta for the Falkner-Skan model.

Sweeps solve successive beta values with warm-started secant iterates
(taken just around the previous converged root), which is what makes the
reverse-flow branch and the region near the fold tractable.  The smallest
solvable beta is located by bisecting on the convergence predicate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import ItmSolution, RootCriteria, solve
from .errors import DegenerateSecant, EvaluationError, SweepSeedFailure
from .integrator import Tolerances
from .problems import falkner_skan

__all__ = [
    "ContinuationEntry",
    "ContinuationPath",
    "BetaMinEstimate",
    "sweep_beta",
    "find_beta_min",
]

# Warm-start seeds straddle the previous root by this relative offset.
WARM_START_SPREAD = 0.05

# Jittered seed retries used before declaring a beta unsolvable.
RETRY_JITTERS = (0.15, 0.30, 0.60)


@dataclass(frozen=True)
class ContinuationEntry:
    beta: float
    branch: int
    h_star_root: float | None
    missing_ic: float | None
    iterations: int
    converged: bool


@dataclass(frozen=True)
class ContinuationPath:
    entries: list


@dataclass(frozen=True)
class BetaMinEstimate:
    beta_min: float
    bracket_width: float
    witness: str
    last_converged: ContinuationEntry | None = None


def _attempt(beta: float, branch: int, seeds, crit: RootCriteria,
             tol: Tolerances, truncated_boundary: float) -> ItmSolution | None:
    """One solve attempt; None means clean non-convergence."""
    p = falkner_skan(beta, branch, truncated_boundary)
    try:
        sol = solve(p, seeds[0], seeds[1], crit, tol)
    except (DegenerateSecant, EvaluationError):
        return None
    return sol if sol.converged else None


def _solve_with_retries(beta, branch, seeds, crit, tol, truncated_boundary):
    """Warm-started solve with jittered retries around the seed pair.

    Returns (solution or None, attempts trace length of the last try)."""
    sol = _attempt(beta, branch, seeds, crit, tol, truncated_boundary)
    if sol is not None:
        return sol
    center = 0.5 * (seeds[0] + seeds[1])
    for jitter in RETRY_JITTERS:
        retry = (center * (1.0 - jitter), center * (1.0 + jitter))
        if retry[0] <= 0:
            continue
        sol = _attempt(beta, branch, retry, crit, tol, truncated_boundary)
        if sol is not None:
            return sol
    return None


def sweep_beta(beta_values, branch: int, seed_iterates,
               crit: RootCriteria | None = None,
               tol: Tolerances | None = None,
               truncated_boundary: float = 20.0) -> ContinuationPath:
    """Solve each beta in order, warm-starting from the previous root.

    Non-convergence is recorded and the sweep continues with the last good
    seeds; failure on the very first beta raises `SweepSeedFailure`.
    """
    beta_values = list(beta_values)
    if not beta_values:
        raise ValueError("beta_values must be non-empty")
    crit = crit or RootCriteria()
    tol = tol or Tolerances()
    entries = []
    seeds = (float(seed_iterates[0]), float(seed_iterates[1]))
    for i, beta in enumerate(beta_values):
        sol = _solve_with_retries(beta, branch, seeds, crit, tol,
                                  truncated_boundary)
        if sol is None:
            # a lone failing beta is a valid (negative) result; failing the
            # first of several leaves nothing to warm-start from
            if i == 0 and len(beta_values) > 1:
                raise SweepSeedFailure(
                    f"sweep seed iterates {seeds} failed at beta={beta}"
                )
            entries.append(ContinuationEntry(beta, branch, None, None,
                                             crit.max_iters, False))
            continue
        entries.append(ContinuationEntry(
            beta, branch, sol.h_star_root, sol.missing_ic,
            len(sol.iterations) - 1, True,
        ))
        seeds = (
            sol.h_star_root * (1.0 - WARM_START_SPREAD),
            sol.h_star_root * (1.0 + WARM_START_SPREAD),
        )
    return ContinuationPath(entries=entries)


def find_beta_min(branch: int, seed_iterates, initial_bracket,
                  width_tol: float,
                  crit: RootCriteria | None = None,
                  tol: Tolerances | None = None,
                  truncated_boundary: float = 20.0) -> BetaMinEstimate:
    """Bisect on beta for the smallest value where the model still solves.

    The predicate is "the warm-started iteration converges"; it must fail
    at the low end of the bracket and succeed at the high end.
    """
    beta_lo, beta_hi = float(initial_bracket[0]), float(initial_bracket[1])
    if not beta_lo < beta_hi:
        raise ValueError("bracket must satisfy beta_lo < beta_hi")
    if width_tol <= 0:
        raise ValueError("width_tol must be positive")
    crit = crit or RootCriteria()
    tol = tol or Tolerances()
    seeds = (float(seed_iterates[0]), float(seed_iterates[1]))

    sol_hi = _solve_with_retries(beta_hi, branch, seeds, crit, tol,
                                 truncated_boundary)
    if sol_hi is None:
        raise ValueError(f"solve must converge at beta_hi={beta_hi}")
    sol_lo = _solve_with_retries(beta_lo, branch, seeds, crit, tol,
                                 truncated_boundary)
    if sol_lo is not None:
        raise ValueError(
            f"solve converged at beta_lo={beta_lo}; bracket does not "
            "straddle the fold"
        )
    witness = (f"non-convergence at beta={beta_lo} after "
               f"{1 + len(RETRY_JITTERS)} seed attempts")
    last = ContinuationEntry(beta_hi, branch, sol_hi.h_star_root,
                             sol_hi.missing_ic,
                             len(sol_hi.iterations) - 1, True)
    warm = (
        sol_hi.h_star_root * (1.0 - WARM_START_SPREAD),
        sol_hi.h_star_root * (1.0 + WARM_START_SPREAD),
    )
    while beta_hi - beta_lo > width_tol:
        mid = 0.5 * (beta_lo + beta_hi)
        sol = _solve_with_retries(mid, branch, warm, crit, tol,
                                  truncated_boundary)
        if sol is None:
            beta_lo = mid
            witness = (f"non-convergence at beta={mid} after "
                       f"{1 + len(RETRY_JITTERS)} seed attempts")
        else:
            beta_hi = mid
            last = ContinuationEntry(mid, branch, sol.h_star_root,
                                     sol.missing_ic,
                                     len(sol.iterations) - 1, True)
            warm = (
                sol.h_star_root * (1.0 - WARM_START_SPREAD),
                sol.h_star_root * (1.0 + WARM_START_SPREAD),
            )
    return BetaMinEstimate(
        beta_min=0.5 * (beta_lo + beta_hi),
        bracket_width=beta_hi - beta_lo,
        witness=witness,
        last_converged=last,
    )
