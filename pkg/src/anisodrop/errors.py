"""Exception types shared across the package."""


class AnisodropError(Exception):
    """Base class for all package-specific failures."""


class GeometryError(AnisodropError):
    """Degenerate or invalid polygon/curve input."""


class NotAGraphError(AnisodropError):
    """A boundary could not be written as a normal graph over the base curve."""


class BracketError(AnisodropError):
    """A 1-D minimization bracket does not contain an interior minimum."""


class ExpansionError(AnisodropError):
    """Variation coefficients are degenerate (e.g. mu1 <= 0), no expansion."""


class UnsupportedError(AnisodropError):
    """Operation not defined for this tension variant or parameter regime."""


class QuadratureError(AnisodropError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the best available estimate so callers can degrade gracefully.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
