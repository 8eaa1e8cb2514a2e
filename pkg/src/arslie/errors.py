"""Exception types shared across the package."""


class ArsLieError(Exception):
    """Base class for all library errors."""


class ValidationError(ArsLieError):
    """Invalid user input: bad shapes, chart constraints, or failed structural preconditions."""


class NumericError(ArsLieError):
    """A numerical computation failed (chart violation, energy drift, blow-up).

    Carries the trajectory time ``t`` at which the failure occurred when known.
    """

    def __init__(self, message: str, t: float | None = None):
        if t is not None:
            message = f"{message} (at t={t:.6g})"
        super().__init__(message)
        self.t = t


class InvariantViolation(ArsLieError):
    """An internal consistency check failed; indicates a bug, not bad input."""
