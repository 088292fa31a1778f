"""Exception hierarchy shared by every module of the package."""


class Mod1Error(Exception):
    """Base class for all errors raised by benford_mod1."""


class DomainError(Mod1Error, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ShapeError(Mod1Error, ValueError):
    """Spectra or tables with incompatible truncations were combined."""


class ConsistencyError(Mod1Error, ArithmeticError):
    """A result that must be real (or symmetric) is not, beyond tolerance."""


class UsageError(Mod1Error, ValueError):
    """An operation was asked for something undefined for its input."""


class RangeError(Mod1Error, ValueError):
    """A truncation window is too small for the requested accuracy."""


class HypothesisViolation(Mod1Error, ValueError):
    """Input breaks a standing hypothesis (e.g. atoms outside the declared set)."""


class ConfigError(Mod1Error, ValueError):
    """An experiment or CLI configuration could not be resolved."""


class QuadratureError(Mod1Error, ArithmeticError):
    """Adaptive quadrature did not reach its tolerance.

    ``error_estimate`` holds the achieved estimate, ``n`` the Fourier
    frequency being computed when the failure happened (if known).
    """

    def __init__(self, message, error_estimate, n=None):
        super().__init__(message)
        self.error_estimate = error_estimate
        self.n = n
