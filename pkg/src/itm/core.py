"""Gamma evaluation and root iteration.

One gamma evaluation solves the starred IVP to the truncated boundary,
recovers the group parameter from the terminal derivative, and reports
gamma = lam**(-sigma) h* - 1.  When the IVP cannot reach the boundary
(blow-up or step underflow) or no positive lambda exists, the sample
carries the sentinel gamma = -1 instead of a number derived from garbage.

`secant_solve` tolerates a single sentinel inside the iteration (the next
iterate usually recovers); two successive sentinels make the secant update
degenerate and raise.  `solve` wraps the secant driver and, on
convergence, re-integrates densely at the root and rescales the starred
profile back to physical variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateSecant, EvaluationError
from .errors import NoPositiveLambda
from .groups import compute_gamma, compute_lambda, map_h, rescale_profile
from .groups import RescaledProfile, starred_initial_state
from .integrator import IntegrationStatus, Tolerances, integrate
from .problems import ProblemSpec

__all__ = [
    "SampleStatus",
    "GammaSample",
    "RootCriteria",
    "ItmSolution",
    "evaluate_gamma",
    "secant_solve",
    "bisection_solve",
    "solve",
]


class SampleStatus(Enum):
    OK = "ok"
    BLOWUP_SENTINEL = "blowup_sentinel"


@dataclass(frozen=True)
class GammaSample:
    h_star: float
    gamma: float
    lam: float | None
    v_star_inf: float
    status: SampleStatus
    integrator_steps: int


@dataclass(frozen=True)
class RootCriteria:
    tol_gamma: float = 1e-6
    tol_rel: float = 1e-6
    tol_abs: float = 1e-6
    max_iters: int = 50

    def __post_init__(self):
        for name in ("tol_gamma", "tol_rel", "tol_abs", "max_iters"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class ItmSolution:
    h_star_root: float | None
    lam: float | None
    missing_ic: float | None
    profile: RescaledProfile | None
    iterations: list
    converged: bool


def evaluate_gamma(p: ProblemSpec, h_star: float, tol: Tolerances) -> GammaSample:
    """One sample of the transformation function at `h_star`."""
    if h_star <= 0:
        raise ValueError("h_star must be positive")
    system = p.starred_rhs(h_star)
    y0 = starred_initial_state(p.boundary, p.group, h_star, p.missing_ic_sign)
    outcome = integrate(system, y0, (0.0, p.truncated_boundary), tol)
    if outcome.status is IntegrationStatus.MAX_STEPS_EXCEEDED:
        raise EvaluationError(
            f"integrator exhausted {tol.max_steps} steps at h*={h_star}"
        )
    v_star_inf = float(outcome.final_state[1])
    if outcome.status is not IntegrationStatus.COMPLETED:
        return GammaSample(h_star, -1.0, None, v_star_inf,
                           SampleStatus.BLOWUP_SENTINEL, outcome.steps_taken)
    try:
        lam = compute_lambda(v_star_inf, h_star, p.group, p.boundary)
    except NoPositiveLambda:
        return GammaSample(h_star, -1.0, None, v_star_inf,
                           SampleStatus.BLOWUP_SENTINEL, outcome.steps_taken)
    gamma = compute_gamma(lam, h_star, p.group.sigma)
    return GammaSample(h_star, gamma, lam, v_star_inf, SampleStatus.OK,
                       outcome.steps_taken)


def _stopped(crit: RootCriteria, current: GammaSample, previous: GammaSample) -> bool:
    return (
        abs(current.gamma) <= crit.tol_gamma
        and abs(current.h_star - previous.h_star)
        <= crit.tol_rel * abs(current.h_star) + crit.tol_abs
    )


def secant_solve(gamma_fn, h0: float, h1: float, crit: RootCriteria):
    """Secant iteration on gamma(h*) restricted to positive h*.

    Returns (root_sample, trace, converged).  Iterates driven nonpositive
    are clamped to half the previous positive iterate.
    """
    if h0 <= 0 or h1 <= 0:
        raise ValueError("initial iterates must be positive")
    if h0 == h1:
        raise ValueError("initial iterates must differ")
    prev = gamma_fn(h0)
    curr = gamma_fn(h1)
    trace = [prev, curr]
    if _stopped(crit, curr, prev):
        return curr, trace, True
    for _ in range(crit.max_iters):
        if curr.gamma == prev.gamma:
            if (curr.status is SampleStatus.BLOWUP_SENTINEL
                    and prev.status is SampleStatus.BLOWUP_SENTINEL):
                raise DegenerateSecant(
                    "two successive blow-up sentinels (gamma = -1)"
                )
            raise DegenerateSecant(
                f"gamma stalled at {curr.gamma} for successive iterates"
            )
        h_next = curr.h_star - curr.gamma * (curr.h_star - prev.h_star) / (
            curr.gamma - prev.gamma
        )
        if h_next <= 0:
            h_next = curr.h_star / 2.0
        prev, curr = curr, gamma_fn(h_next)
        trace.append(curr)
        if curr.status is SampleStatus.OK and _stopped(crit, curr, prev):
            return curr, trace, True
    return curr, trace, False


def bisection_solve(gamma_fn, bracket, crit: RootCriteria):
    """Bisection on a sign-change bracket of gamma; same return shape as
    `secant_solve`."""
    lo, hi = bracket
    if not 0 < lo < hi:
        raise ValueError("bracket must satisfy 0 < lo < hi")
    s_lo = gamma_fn(lo)
    s_hi = gamma_fn(hi)
    if s_lo.status is not SampleStatus.OK or s_hi.status is not SampleStatus.OK:
        raise ValueError("bracket endpoints must be sentinel-free")
    if s_lo.gamma * s_hi.gamma >= 0:
        raise ValueError("bracket endpoints must have opposite gamma signs")
    trace = [s_lo, s_hi]
    for _ in range(crit.max_iters):
        mid = 0.5 * (lo + hi)
        s_mid = gamma_fn(mid)
        trace.append(s_mid)
        width = hi - lo
        if (abs(s_mid.gamma) <= crit.tol_gamma
                or width <= crit.tol_rel * abs(mid) + crit.tol_abs):
            return s_mid, trace, True
        if s_lo.gamma * s_mid.gamma < 0:
            hi, s_hi = mid, s_mid
        else:
            lo, s_lo = mid, s_mid
    return trace[-1], trace, False


def _per_iterate_missing_ic(sample: GammaSample, p: ProblemSpec):
    if sample.lam is None:
        return None
    return p.missing_ic_sign * sample.lam ** (2.0 * p.group.delta - 1.0)


def solve(p: ProblemSpec, h0: float, h1: float, crit: RootCriteria,
          tol: Tolerances) -> ItmSolution:
    """Full iterative transformation solve: secant to gamma = 0, then a
    dense re-integration at the root rescaled to physical variables."""
    root, trace, converged = secant_solve(
        lambda h: evaluate_gamma(p, h, tol), h0, h1, crit
    )
    iterations = [
        (j, s.h_star, s.lam, s.gamma, _per_iterate_missing_ic(s, p))
        for j, s in enumerate(trace)
    ]
    if not converged or root.lam is None:
        return ItmSolution(None, None, None, None, iterations, False)

    system = p.starred_rhs(root.h_star)
    y0 = starred_initial_state(p.boundary, p.group, root.h_star,
                               p.missing_ic_sign)
    outcome = integrate(system, y0, (0.0, p.truncated_boundary), tol,
                        sampling="dense")
    starred = np.array(
        [(t, y[0], y[1], y[2]) for t, y in outcome.samples]
    )
    profile = rescale_profile(starred, root.lam, p.group)
    missing_ic = p.missing_ic_sign * root.lam ** (2.0 * p.group.delta - 1.0)
    return ItmSolution(root.h_star, root.lam, missing_ic, profile,
                       iterations, True)
