"""Adaptive Dormand-Prince 5(4) integration for small ODE systems.

Every initial value problem in this package goes through `integrate`.
Two back ends share the same stepping scheme:

* a numba-compiled kernel, used when the system carries a jitted
  right-hand side (`OdeSystem.rhs_nb`) and only the final state is needed;
* a vectorized numpy loop, used as the fallback and always for dense
  sampling.

Set the environment variable ``ITM_BACKEND`` to ``numpy`` to force the
fallback everywhere, or to ``numba`` to require the kernel (an error is
raised if numba is unavailable).  The default ``auto`` prefers the kernel
whenever a jitted right-hand side is present.

Right-hand sides have the signature ``rhs(t, y, params) -> ndarray`` where
``params`` is a flat float array of problem constants (possibly empty).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

__all__ = [
    "OdeSystem",
    "Tolerances",
    "IntegrationStatus",
    "IntegrationOutcome",
    "integrate",
    "rk4_fixed",
]

_EPS = np.finfo(float).eps

# Dormand-Prince 5(4) tableau.  Row 6 of _A holds the 5th-order weights;
# _E is the difference between the 5th and embedded 4th order weights.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.zeros((7, 7))
_A[1, 0] = 1 / 5
_A[2, :2] = (3 / 40, 9 / 40)
_A[3, :3] = (44 / 45, -56 / 15, 32 / 9)
_A[4, :4] = (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729)
_A[5, :5] = (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656)
_A[6, :6] = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_B = _A[6].copy()
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)

_STATUS_COMPLETED = 0
_STATUS_BLOWUP = 1
_STATUS_UNDERFLOW = 2
_STATUS_MAX_STEPS = 3


class IntegrationStatus(Enum):
    COMPLETED = "completed"
    BLOWUP = "blowup"
    STEP_UNDERFLOW = "step_underflow"
    MAX_STEPS_EXCEEDED = "max_steps_exceeded"


_STATUS_FROM_CODE = {
    _STATUS_COMPLETED: IntegrationStatus.COMPLETED,
    _STATUS_BLOWUP: IntegrationStatus.BLOWUP,
    _STATUS_UNDERFLOW: IntegrationStatus.STEP_UNDERFLOW,
    _STATUS_MAX_STEPS: IntegrationStatus.MAX_STEPS_EXCEEDED,
}


@dataclass(frozen=True)
class OdeSystem:
    """A first-order ODE system ``dy/dt = rhs(t, y, params)``.

    `rhs_nb`, when present, must be a numba dispatcher computing the same
    function; it enables the compiled kernel.
    """

    dimension: int
    rhs: object
    rhs_nb: object = None
    params: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if self.dimension <= 0:
            raise ValueError("dimension must be positive")


@dataclass(frozen=True)
class Tolerances:
    rel_tol: float = 1e-6
    abs_tol: float = 1e-6
    max_steps: int = 1_000_000
    blowup_cap: float = 1e10

    def __post_init__(self):
        if self.rel_tol < _EPS or self.abs_tol < _EPS:
            raise ValueError("tolerances must be at least machine epsilon")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if self.blowup_cap <= 1.0:
            raise ValueError("blowup_cap must exceed 1")


@dataclass(frozen=True)
class IntegrationOutcome:
    status: IntegrationStatus
    final_t: float
    final_state: np.ndarray
    samples: list | None
    steps_taken: int


def _backend_mode() -> str:
    mode = os.environ.get("ITM_BACKEND", "auto")
    if mode not in ("auto", "numba", "numpy"):
        raise ValueError(f"unknown ITM_BACKEND value: {mode!r}")
    return mode


def _integrate_numpy(rhs, t0, t1, y0, params, rel_tol, abs_tol, max_steps,
                     blowup_cap, record):
    """Vectorized fallback loop; also records step endpoints when asked."""
    n = y0.shape[0]
    t = t0
    y = y0.astype(float).copy()
    h = (t1 - t0) / 100.0
    h_min = 1e-14 * (t1 - t0)
    attempts = 0
    samples = [(t0, y.copy())] if record else None
    K = np.empty((7, n))
    while t < t1:
        if attempts >= max_steps:
            return _STATUS_MAX_STEPS, t, y, samples, attempts
        if h > t1 - t:
            h = t1 - t
        K[0] = rhs(t, y, params)
        for i in range(1, 7):
            yi = y + h * (K[:i].T @ _A[i, :i])
            K[i] = rhs(t + _C[i] * h, yi, params)
        y_new = y + h * (K.T @ _B)
        err_vec = h * (K.T @ _E)
        attempts += 1
        finite = bool(np.all(np.isfinite(y_new)))
        if finite:
            scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
            err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
        else:
            err = np.inf
        if finite and err <= 1.0:
            t = t + h
            y = y_new
            if record:
                samples.append((t, y.copy()))
            if np.any(np.abs(y) > blowup_cap):
                return _STATUS_BLOWUP, t, y, samples, attempts
            if t >= t1:
                return _STATUS_COMPLETED, t, y, samples, attempts
        if not finite or err == np.inf:
            factor = 0.2
        elif err == 0.0:
            factor = 5.0
        else:
            factor = min(5.0, max(0.2, 0.9 * err ** -0.2))
        h = h * factor
        if h < h_min:
            return _STATUS_UNDERFLOW, t, y, samples, attempts
    return _STATUS_COMPLETED, t, y, samples, attempts


def _integrate_kernel(rhs, t0, t1, y0, params, rel_tol, abs_tol, max_steps,
                      blowup_cap):
    """Final-state-only stepping loop, written for numba compilation.

    `rhs` is a numba dispatcher; the kernel specializes per right-hand side.
    """
    n = y0.shape[0]
    t = t0
    y = y0.copy()
    h = (t1 - t0) / 100.0
    h_min = 1e-14 * (t1 - t0)
    attempts = 0
    K = np.empty((7, n))
    yi = np.empty(n)
    y_new = np.empty(n)
    while t < t1:
        if attempts >= max_steps:
            return _STATUS_MAX_STEPS, t, y, attempts
        if h > t1 - t:
            h = t1 - t
        K[0] = rhs(t, y, params)
        for i in range(1, 7):
            for m in range(n):
                acc = y[m]
                for j in range(i):
                    acc += h * _A[i, j] * K[j, m]
                yi[m] = acc
            K[i] = rhs(t + _C[i] * h, yi, params)
        err = 0.0
        finite = True
        for m in range(n):
            acc = y[m]
            e = 0.0
            for j in range(7):
                acc += h * _B[j] * K[j, m]
                e += h * _E[j] * K[j, m]
            y_new[m] = acc
            if not np.isfinite(acc):
                finite = False
        if finite:
            for m in range(n):
                big = abs(y[m])
                if abs(y_new[m]) > big:
                    big = abs(y_new[m])
                scale = abs_tol + rel_tol * big
                e = 0.0
                for j in range(7):
                    e += h * _E[j] * K[j, m]
                err += (e / scale) ** 2
            err = np.sqrt(err / n)
        attempts += 1
        if finite and err <= 1.0:
            t = t + h
            for m in range(n):
                y[m] = y_new[m]
            blown = False
            for m in range(n):
                if abs(y[m]) > blowup_cap:
                    blown = True
            if blown:
                return _STATUS_BLOWUP, t, y, attempts
            if t >= t1:
                return _STATUS_COMPLETED, t, y, attempts
        if not finite:
            factor = 0.2
        elif err == 0.0:
            factor = 5.0
        else:
            factor = 0.9 * err ** -0.2
            if factor < 0.2:
                factor = 0.2
            elif factor > 5.0:
                factor = 5.0
        h = h * factor
        if h < h_min:
            return _STATUS_UNDERFLOW, t, y, attempts
    return _STATUS_COMPLETED, t, y, attempts


if _HAVE_NUMBA:
    _integrate_kernel_nb = njit(_integrate_kernel)


def integrate(system: OdeSystem, y0, interval, tol: Tolerances,
              sampling: str = "final") -> IntegrationOutcome:
    """Integrate `system` over `interval` with local error control.

    `sampling` is ``"final"`` (final state only) or ``"dense"`` (record the
    state at every accepted step endpoint; no interpolation).  Dense runs
    always use the numpy loop.
    """
    t0, t1 = float(interval[0]), float(interval[1])
    if not t1 > t0:
        raise ValueError("interval must satisfy t1 > t0")
    y0 = np.asarray(y0, dtype=float)
    if y0.shape != (system.dimension,):
        raise ValueError(
            f"initial state has shape {y0.shape}, expected ({system.dimension},)"
        )
    if sampling not in ("final", "dense"):
        raise ValueError(f"unknown sampling mode: {sampling!r}")

    mode = _backend_mode()
    if mode == "numba" and not _HAVE_NUMBA:
        raise RuntimeError("ITM_BACKEND=numba but numba is not importable")
    use_kernel = (
        sampling == "final"
        and system.rhs_nb is not None
        and _HAVE_NUMBA
        and mode in ("auto", "numba")
    )

    if use_kernel:
        code, t, y, steps = _integrate_kernel_nb(
            system.rhs_nb, t0, t1, y0, system.params,
            tol.rel_tol, tol.abs_tol, tol.max_steps, tol.blowup_cap,
        )
        samples = None
    else:
        code, t, y, samples, steps = _integrate_numpy(
            system.rhs, t0, t1, y0, system.params,
            tol.rel_tol, tol.abs_tol, tol.max_steps, tol.blowup_cap,
            sampling == "dense",
        )
    return IntegrationOutcome(
        status=_STATUS_FROM_CODE[code],
        final_t=float(t),
        final_state=np.array(y, dtype=float),
        samples=samples,
        steps_taken=int(steps),
    )


def rk4_fixed(system: OdeSystem, y0, interval, n_steps: int) -> np.ndarray:
    """Classic fixed-step RK4; tolerance-free variant used in convergence
    tests only."""
    t0, t1 = float(interval[0]), float(interval[1])
    if n_steps <= 0:
        raise ValueError("n_steps must be positive")
    h = (t1 - t0) / n_steps
    y = np.asarray(y0, dtype=float).copy()
    t = t0
    p = system.params
    for _ in range(n_steps):
        k1 = system.rhs(t, y, p)
        k2 = system.rhs(t + h / 2, y + h / 2 * k1, p)
        k3 = system.rhs(t + h / 2, y + h / 2 * k2, p)
        k4 = system.rhs(t + h, y + h * k3, p)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return y
