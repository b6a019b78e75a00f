"""Exception types raised across the package."""


class FloqpolError(Exception):
    """Base class for all package errors."""


class ModelParseError(FloqpolError, ValueError):
    """Model file could not be parsed."""


class ModelValidationError(FloqpolError, ValueError):
    """Model contents violate an invariant (symmetry, finiteness, size)."""


class DimensionError(FloqpolError, ValueError):
    """Truncated Floquet matrix would exceed the configured size cap."""


class AsymmetryError(FloqpolError, ValueError):
    """Matrix handed to the symmetric eigensolver is not symmetric."""


class ConvergenceError(FloqpolError, RuntimeError):
    """An iterative procedure did not reach its tolerance.

    ``values`` carries the last iterates when they are meaningful
    (e.g. the last two P_1 values of a truncation sweep).
    """

    def __init__(self, message: str, values: tuple = ()):
        super().__init__(message)
        self.values = tuple(values)


class SingularBasisError(FloqpolError, RuntimeError):
    """The t=0 Floquet basis matrix B cannot be inverted at all."""


class PoleError(FloqpolError, ZeroDivisionError):
    """Closed-form expression evaluated at (or next to) its pole."""


class ResonanceError(FloqpolError, ZeroDivisionError):
    """Sum-over-states expression evaluated at a transition frequency."""


class PropagationError(FloqpolError, RuntimeError):
    """Time propagation produced non-finite amplitudes."""

    def __init__(self, message: str, last_valid_time: float):
        super().__init__(message)
        self.last_valid_time = last_valid_time


class StepSizeError(FloqpolError, ValueError):
    """Propagation step is coarser than the accuracy guard allows."""


class StepSizeWarning(UserWarning):
    """Propagation step guard was overridden."""


class FitError(FloqpolError, ValueError):
    """Susceptibility fit is under-determined or ill-conditioned."""


class ScanSpecError(FloqpolError, ValueError):
    """Scan specification is invalid."""
