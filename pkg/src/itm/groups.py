"""Algebra of the extended stretching group.

The group acts as ``x* = lam**delta * x``, ``u* = lam * u``,
``h* = lam**sigma * h``.  This module holds the pure scaling arithmetic:
starred initial conditions, recovery of the group parameter from the
terminal starred derivative, the transformation function gamma, the h map,
and the rescaling of starred solution profiles back to physical variables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoPositiveLambda

__all__ = [
    "GroupSpec",
    "BoundaryData",
    "RescaledProfile",
    "starred_initial_state",
    "compute_lambda",
    "compute_gamma",
    "map_h",
    "rescale_profile",
]


@dataclass(frozen=True)
class GroupSpec:
    """Stretching-group exponents; both must be nonzero."""

    delta: float
    sigma: float

    def __post_init__(self):
        if self.delta == 0.0:
            raise ValueError("delta must be nonzero")
        if self.sigma == 0.0:
            raise ValueError("sigma must be nonzero")


@dataclass(frozen=True)
class BoundaryData:
    """Boundary values of the physical problem: u(0), u'(0), u'(inf)."""

    u0: float
    v0: float
    v_inf: float


@dataclass(frozen=True)
class RescaledProfile:
    """Physical-variable solution samples, columns (x, u, du, d2u)."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 4:
            raise ValueError("points must have shape (n, 4)")
        if pts.shape[0] > 1 and not np.all(np.diff(pts[:, 0]) > 0):
            raise ValueError("x column must be strictly increasing")
        object.__setattr__(self, "points", pts)


def starred_initial_state(bd: BoundaryData, g: GroupSpec, h_star: float,
                          s: int) -> np.ndarray:
    """Initial state [u*(0), du*(0), d2u*(0)] of the starred IVP.

    The missing second derivative is set to the branch sign `s`.
    """
    if h_star <= 0:
        raise ValueError("h_star must be positive")
    if s not in (1, -1):
        raise ValueError("branch sign must be +1 or -1")
    return np.array(
        [
            h_star ** (1.0 / g.sigma) * bd.u0,
            h_star ** ((1.0 - g.delta) / g.sigma) * bd.v0,
            float(s),
        ]
    )


def compute_lambda(v_star_inf: float, h_star: float, g: GroupSpec,
                   bd: BoundaryData) -> float:
    """Group parameter lambda from the terminal starred derivative.

    With a nonzero asymptotic derivative the base is the ratio
    v*'(inf)/v_inf; with a vanishing one the non-invariant side condition
    shifts the base by h***((1-delta)/sigma).  A nonpositive base means no
    positive lambda exists and raises `NoPositiveLambda`.
    """
    if h_star <= 0:
        raise ValueError("h_star must be positive")
    if g.delta == 1.0:
        raise ValueError("delta = 1 leaves the lambda exponent undefined")
    if bd.v_inf != 0.0:
        base = v_star_inf / bd.v_inf
    else:
        base = v_star_inf + h_star ** ((1.0 - g.delta) / g.sigma)
    if base <= 0.0:
        raise NoPositiveLambda(f"lambda power base {base} is nonpositive")
    return base ** (1.0 / (1.0 - g.delta))


def map_h(lam: float, h_star: float, sigma: float) -> float:
    """The h value reached by scaling h* with lambda: h = lam**(-sigma) h*."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if h_star <= 0:
        raise ValueError("h_star must be positive")
    return lam ** -sigma * h_star


def compute_gamma(lam: float, h_star: float, sigma: float) -> float:
    """Transformation function gamma = lam**(-sigma) h* - 1; zero iff the
    scaled solution lands on h = 1."""
    return map_h(lam, h_star, sigma) - 1.0


def rescale_profile(starred, lam: float, g: GroupSpec) -> RescaledProfile:
    """Map a starred profile (columns x*, u*, du*, d2u*) back to physical
    variables with the group parameter `lam`."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    pts = np.asarray(starred, dtype=float)
    out = np.empty_like(pts)
    out[:, 0] = lam ** -g.delta * pts[:, 0]
    out[:, 1] = lam ** -1.0 * pts[:, 1]
    out[:, 2] = lam ** (g.delta - 1.0) * pts[:, 2]
    out[:, 3] = lam ** (2.0 * g.delta - 1.0) * pts[:, 3]
    return RescaledProfile(points=out)
