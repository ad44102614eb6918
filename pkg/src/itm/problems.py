"""Problem presets: the generic embedded third-order class, the Sakiadis
boundary layer, and the Falkner-Skan model.

Each preset fixes the stretching-group exponents, the boundary data, the
branch sign of the starred missing initial condition, and a builder that
produces the starred IVP system for a given h*.  The preset right-hand
sides come in plain and numba-jitted forms so the integrator can pick its
compiled kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import BoundaryData, GroupSpec
from .integrator import OdeSystem

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

__all__ = ["ProblemSpec", "sakiadis", "falkner_skan", "generic_third_order"]


@dataclass(frozen=True)
class ProblemSpec:
    """A third-order BVP on [0, inf) together with its embedding data."""

    name: str
    group: GroupSpec
    boundary: BoundaryData
    starred_rhs: object  # h* -> OdeSystem of dimension 3
    missing_ic_sign: int
    truncated_boundary: float
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.missing_ic_sign not in (1, -1):
            raise ValueError("missing_ic_sign must be +1 or -1")
        if self.truncated_boundary <= 0:
            raise ValueError("truncated_boundary must be positive")


def _sakiadis_rhs(t, y, p):
    out = np.empty(3)
    out[0] = y[1]
    out[1] = y[2]
    out[2] = -0.5 * y[0] * y[2]
    return out


def _falkner_skan_rhs(t, y, p):
    beta = p[0]
    h_star = p[1]
    out = np.empty(3)
    out[0] = y[1]
    out[1] = y[2]
    out[2] = -y[0] * y[2] - beta * (h_star - y[1] * y[1])
    return out


if _HAVE_NUMBA:
    _sakiadis_rhs_nb = njit(cache=True)(_sakiadis_rhs)
    _falkner_skan_rhs_nb = njit(cache=True)(_falkner_skan_rhs)
else:  # pragma: no cover
    _sakiadis_rhs_nb = None
    _falkner_skan_rhs_nb = None


def sakiadis(sign: int, truncated_boundary: float = 10.0) -> ProblemSpec:
    """Sakiadis boundary layer: f''' + f f''/2 = 0 with f(0)=0, f'(0)=1,
    f'(inf)=0.  The starred equation is invariant, so the IVP does not
    depend on h*."""

    def build(h_star: float) -> OdeSystem:
        return OdeSystem(3, _sakiadis_rhs, rhs_nb=_sakiadis_rhs_nb)

    return ProblemSpec(
        name="sakiadis",
        group=GroupSpec(delta=-1.0, sigma=4.0),
        boundary=BoundaryData(u0=0.0, v0=1.0, v_inf=0.0),
        starred_rhs=build,
        missing_ic_sign=sign,
        truncated_boundary=truncated_boundary,
    )


def falkner_skan(beta: float, sign: int,
                 truncated_boundary: float = 20.0) -> ProblemSpec:
    """Falkner-Skan model: f''' + f f'' + beta [1 - (f')^2] = 0 with
    f(0)=f'(0)=0, f'(inf)=1.  The starred equation carries h* explicitly
    (the model is not invariant), so a fresh system is built per h*."""

    def build(h_star: float) -> OdeSystem:
        return OdeSystem(
            3,
            _falkner_skan_rhs,
            rhs_nb=_falkner_skan_rhs_nb,
            params=np.array([beta, h_star]),
        )

    return ProblemSpec(
        name="falkner-skan",
        group=GroupSpec(delta=-1.0, sigma=4.0),
        boundary=BoundaryData(u0=0.0, v0=0.0, v_inf=1.0),
        starred_rhs=build,
        missing_ic_sign=sign,
        truncated_boundary=truncated_boundary,
        params={"beta": beta},
    )


def generic_third_order(f, bd: BoundaryData, g: GroupSpec, x_inf: float,
                        sign: int, name: str = "generic") -> ProblemSpec:
    """Embed an arbitrary u''' = f(x, u, u', u'') into the h-parameterized
    family.  The starred right-hand side is

        h**((1-3d)/s) * f(h**(-d/s) x, h**(-1/s) u,
                          h**((d-1)/s) u', h**((2d-1)/s) u'')

    and collapses back to `f` at h = 1.  Runs on the numpy fallback path
    (the user callable is not jitted)."""
    if g.delta == 1.0:
        raise ValueError("delta = 1 leaves the lambda exponent undefined")
    d, s = g.delta, g.sigma
    e_rhs = (1.0 - 3.0 * d) / s
    e_x = -d / s
    e_u = -1.0 / s
    e_du = (d - 1.0) / s
    e_d2u = (2.0 * d - 1.0) / s

    def build(h_star: float) -> OdeSystem:
        c_rhs = h_star ** e_rhs
        c_x = h_star ** e_x
        c_u = h_star ** e_u
        c_du = h_star ** e_du
        c_d2u = h_star ** e_d2u

        def rhs(t, y, p):
            out = np.empty(3)
            out[0] = y[1]
            out[1] = y[2]
            out[2] = c_rhs * f(c_x * t, c_u * y[0], c_du * y[1], c_d2u * y[2])
            return out

        return OdeSystem(3, rhs)

    return ProblemSpec(
        name=name,
        group=g,
        boundary=bd,
        starred_rhs=build,
        missing_ic_sign=sign,
        truncated_boundary=x_inf,
    )
