"""Exception types raised by the numerical routines."""


class SymEntropyError(Exception):
    """Base class for all errors raised by this package."""


class DomainViolation(SymEntropyError, ValueError):
    """Input lies outside the domain an operation is defined on."""


class ConvergenceFailure(SymEntropyError, RuntimeError):
    """An iterative method did not reach its tolerance within the iteration cap."""


class QuadratureFailure(SymEntropyError, RuntimeError):
    """Adaptive quadrature could not reach the requested tolerance."""

    def __init__(self, message, value=None, error=None, panels=None):
        super().__init__(message)
        self.value = value
        self.error = error
        self.panels = panels


class DivergentIntegral(SymEntropyError, ArithmeticError):
    """The integral defining a derivative is not finite.

    ``sign`` is +1 or -1 and gives the direction of the divergence;
    ``endpoint`` names where the integrand fails to be integrable.
    """

    def __init__(self, message, sign=1, endpoint="0"):
        super().__init__(message)
        self.sign = int(sign)
        self.endpoint = endpoint

    def as_record(self):
        return {
            "kind": "divergent_integral",
            "value": "+inf" if self.sign > 0 else "-inf",
            "endpoint": self.endpoint,
            "message": str(self),
        }


class ContourViolation(SymEntropyError, ValueError):
    """No admissible contour: a root is outside or on it, or it meets (-inf, 0]."""


class NotComparable(SymEntropyError, ValueError):
    """Neither vector majorizes the other."""


class NoiseFloorExceeded(SymEntropyError):
    """A finite difference fell below the level that rounding noise can resolve."""
