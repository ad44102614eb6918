"""Iterative transformation method for third-order BVPs on semi-infinite
intervals, with a gamma-zero-counting existence/uniqueness test."""

from .continuation import (BetaMinEstimate, ContinuationEntry,
                           ContinuationPath, find_beta_min, sweep_beta)
from .core import (GammaSample, ItmSolution, RootCriteria, SampleStatus,
                   bisection_solve, evaluate_gamma, secant_solve, solve)
from .errors import (DegenerateSecant, EvaluationError, NoPositiveLambda,
                     SensitivityUndefined, SweepSeedFailure)
from .existence import (ScanReport, Verdict, classify, scan_gamma,
                        sensitivity_at)
from .groups import (BoundaryData, GroupSpec, RescaledProfile, compute_gamma,
                     compute_lambda, map_h, rescale_profile,
                     starred_initial_state)
from .integrator import (IntegrationOutcome, IntegrationStatus, OdeSystem,
                         Tolerances, integrate, rk4_fixed)
from .problems import ProblemSpec, falkner_skan, generic_third_order, sakiadis

__version__ = "0.1.0"

__all__ = [
    "BetaMinEstimate", "ContinuationEntry", "ContinuationPath",
    "find_beta_min", "sweep_beta",
    "GammaSample", "ItmSolution", "RootCriteria", "SampleStatus",
    "bisection_solve", "evaluate_gamma", "secant_solve", "solve",
    "DegenerateSecant", "EvaluationError", "NoPositiveLambda",
    "SensitivityUndefined", "SweepSeedFailure",
    "ScanReport", "Verdict", "classify", "scan_gamma", "sensitivity_at",
    "BoundaryData", "GroupSpec", "RescaledProfile", "compute_gamma",
    "compute_lambda", "map_h", "rescale_profile", "starred_initial_state",
    "IntegrationOutcome", "IntegrationStatus", "OdeSystem", "Tolerances",
    "integrate", "rk4_fixed",
    "ProblemSpec", "falkner_skan", "generic_third_order", "sakiadis",
]
