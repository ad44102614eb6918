"""Exception types shared across the package."""


class NoPositiveLambda(ValueError):
    """The group parameter has no positive value for this starred solution.

    Raised when the base of the lambda power is nonpositive; callers in the
    iteration layer map this to the gamma = -1 sentinel.
    """


class EvaluationError(RuntimeError):
    """A gamma evaluation failed for configuration reasons (e.g. the
    integrator hit its step budget), as opposed to a blow-up sentinel."""


class DegenerateSecant(RuntimeError):
    """Two successive secant iterates produced identical gamma values
    (including two successive blow-up sentinels), so the update is
    undefined."""


class SensitivityUndefined(RuntimeError):
    """A finite-difference probe for the gamma slope hit a sentinel."""


class SweepSeedFailure(RuntimeError):
    """The first entry of a continuation sweep failed to converge, so no
    warm start is available for the rest of the sweep."""
