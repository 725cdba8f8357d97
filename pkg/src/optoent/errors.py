"""Exception types shared across the package."""


class OptoentError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(OptoentError, ValueError):
    """A physical input is out of its allowed range; names the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class InfeasibleTargetError(OptoentError, ValueError):
    """Requested pump-rate targets cannot be realized (negative G+ or G-)."""


class NormalizationError(OptoentError, ValueError):
    """Combination weights do not satisfy |z+|^2 + |z-|^2 = 1."""


class SingularResponseError(OptoentError, ArithmeticError):
    """The linear response is singular at the requested spectral frequency."""

    def __init__(self, omega: float, message: str = "singular response"):
        self.omega = omega
        super().__init__(f"{message} at omega = {omega!r} rad/s")


class BandwidthUndefinedError(OptoentError, RuntimeError):
    """The bandwidth criterion is never crossed (or its precondition fails)."""


class ThresholdError(OptoentError, ValueError):
    """Parametric amplifier at or above the oscillation threshold."""


class NoSignalError(OptoentError, ValueError):
    """Force sensor has zero signal transfer (no optomechanical coupling)."""


class PreconditionError(OptoentError, ValueError):
    """An operation was called on input violating its stated precondition."""


class NonStationaryError(OptoentError, RuntimeError):
    """Mean-field integration did not reach a stationary state.

    Carries the tail of the trajectory for inspection (limit cycle or
    divergence diagnostics).
    """

    def __init__(self, message: str, tail=None):
        self.tail = tail
        super().__init__(message)
