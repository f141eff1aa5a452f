"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A constructor or config string received an out-of-range or unknown parameter."""


class NumericsError(RuntimeError):
    """Base class for failures of a numerical routine (quadrature, inversion, series)."""

    def __init__(self, message, achieved_error=None):
        super().__init__(message)
        self.achieved_error = achieved_error


class QuadratureError(NumericsError):
    """An integral did not converge to the requested tolerance."""


class InversionError(NumericsError):
    """A Laplace inversion failed or is outside the reliable regime of the method."""


class ConvergenceError(NumericsError):
    """A series or iteration stopped short of the requested tolerance."""


class DivergenceError(NumericsError):
    """Partial integrals fail the Cauchy test: the quantity diverges."""
