"""Existence and uniqueness scanning.

The number of real zeros of the transformation function equals the number
of BVP solutions, so scanning gamma over an h* grid and counting
sign-change brackets gives numerical evidence for existence and
uniqueness.  Sign counting only bounds the zero count from below
(even-multiplicity zeros are invisible), hence the guarded verdict names.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import GammaSample, SampleStatus, evaluate_gamma
from .errors import SensitivityUndefined
from .integrator import Tolerances
from .problems import ProblemSpec

__all__ = ["Verdict", "ScanReport", "scan_gamma", "sensitivity_at", "classify"]

_EPS = float(np.finfo(float).eps)

# |dGamma/dh*| below this is treated as ill-conditioned; 1e3 x machine
# rounding unit leaves margin for integrator noise at tolerance 1e-6.
WELL_CONDITIONED_THRESHOLD = 1e3 * _EPS

# A no-bracket scan only counts as evidence of nonexistence when it has at
# least this many clean samples spanning at least one decade of h*.
MIN_SAMPLES_FOR_VERDICT = 10
MIN_SPAN_RATIO = 10.0


class Verdict(Enum):
    NO_SOLUTION_DETECTED = "no_solution_detected"
    UNIQUE_SOLUTION_INDICATED = "unique_solution_indicated"
    MULTIPLE_SOLUTIONS_INDICATED = "multiple_solutions_indicated"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ScanReport:
    samples: list
    brackets: list
    zero_count_lower_bound: int
    verdict: Verdict
    sensitivity: list  # (root_estimate, dGamma_dh_estimate, well_conditioned)


def _find_brackets(samples):
    """Sign-change intervals between consecutive sentinel-free samples;
    a sentinel breaks continuity, so no bracket may span one."""
    brackets = []
    for a, b in zip(samples, samples[1:]):
        if a.status is not SampleStatus.OK or b.status is not SampleStatus.OK:
            continue
        if a.gamma * b.gamma < 0:
            brackets.append((a.h_star, b.h_star))
    return brackets


def scan_gamma(p: ProblemSpec, grid, tol: Tolerances,
               workers: int | None = None) -> ScanReport:
    """Evaluate gamma on a strictly increasing positive grid and assemble
    brackets, verdict, and per-bracket conditioning estimates.

    Grid points are independent; `workers` > 1 evaluates them in a thread
    pool with results assembled in grid order.
    """
    grid = [float(h) for h in grid]
    if len(grid) < 2:
        raise ValueError("grid needs at least 2 points")
    if any(h <= 0 for h in grid):
        raise ValueError("grid points must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(lambda h: evaluate_gamma(p, h, tol), grid))
    else:
        samples = [evaluate_gamma(p, h, tol) for h in grid]

    brackets = _find_brackets(samples)
    by_h = {s.h_star: s for s in samples}
    sensitivity = []
    for lo, hi in brackets:
        a, b = by_h[lo], by_h[hi]
        # secant-style slope and root estimate from the bracket endpoints;
        # no extra IVP solves
        slope = (b.gamma - a.gamma) / (hi - lo)
        root_est = lo - a.gamma * (hi - lo) / (b.gamma - a.gamma)
        sensitivity.append(
            (root_est, slope, abs(slope) > WELL_CONDITIONED_THRESHOLD)
        )
    report = ScanReport(
        samples=samples,
        brackets=brackets,
        zero_count_lower_bound=len(brackets),
        verdict=Verdict.INCONCLUSIVE,
        sensitivity=sensitivity,
    )
    return ScanReport(
        samples=samples,
        brackets=brackets,
        zero_count_lower_bound=len(brackets),
        verdict=classify(report),
        sensitivity=sensitivity,
    )


def sensitivity_at(gamma_fn, root_estimate: float, rel_step: float):
    """Central-difference slope of gamma at a root estimate.

    Returns (slope, well_conditioned).  Probes that land on a sentinel make
    the slope meaningless and raise `SensitivityUndefined`.
    """
    if not 1e-8 < rel_step < 1e-1:
        raise ValueError("rel_step must lie in (1e-8, 1e-1)")
    if root_estimate <= 0:
        raise ValueError("root_estimate must be positive")
    plus = gamma_fn(root_estimate * (1.0 + rel_step))
    minus = gamma_fn(root_estimate * (1.0 - rel_step))
    for probe in (plus, minus):
        if probe.status is not SampleStatus.OK:
            raise SensitivityUndefined(
                f"probe at h*={probe.h_star} returned a blow-up sentinel"
            )
    slope = (plus.gamma - minus.gamma) / (2.0 * root_estimate * rel_step)
    return slope, abs(slope) > WELL_CONDITIONED_THRESHOLD


def classify(report: ScanReport) -> Verdict:
    """Verdict from the bracket count; a bracket-free scan is evidence of
    nonexistence only when wide and dense enough."""
    n = report.zero_count_lower_bound
    if n == 1:
        return Verdict.UNIQUE_SOLUTION_INDICATED
    if n >= 2:
        return Verdict.MULTIPLE_SOLUTIONS_INDICATED
    ok = [s for s in report.samples if s.status is SampleStatus.OK]
    if len(ok) >= MIN_SAMPLES_FOR_VERDICT:
        span = ok[-1].h_star / ok[0].h_star
        if span >= MIN_SPAN_RATIO:
            return Verdict.NO_SOLUTION_DETECTED
    return Verdict.INCONCLUSIVE
