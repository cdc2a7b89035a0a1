"""Exception hierarchy shared by every module."""


class GHGError(Exception):
    """Base class for all errors raised by :mod:`ghgcs`."""


class DomainError(GHGError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ParameterError(GHGError, ValueError):
    """Invalid hypergeometric parameter vectors."""


class DivergenceError(GHGError, ArithmeticError):
    """Series argument on or outside the convergence radius."""


class ZeroRadiusError(DivergenceError):
    """Series with p > q + 1 upper parameters diverges for every x != 0."""


class ConvergenceError(GHGError, ArithmeticError):
    """A summation hit its term cap before meeting the tolerance."""


class AccuracyError(GHGError, ArithmeticError):
    """Quadrature could not reach the requested accuracy.

    The best available estimate is kept on the exception so that callers
    can still report it.
    """

    def __init__(self, message, value=float("nan"), error=float("inf")):
        super().__init__(message)
        self.value = value
        self.error = error


class SpectrumError(GHGError, ValueError):
    """A spectrum produced a non-positive eigenvalue where e(m) > 0 is required."""


class ConfigurationError(GHGError, ValueError):
    """Mismatched inputs, e.g. a weight family paired with the wrong spectrum."""
