"""Exception and warning types raised across the package."""


class GupMagError(Exception):
    """Base class for all package errors."""


class DomainError(GupMagError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class GupViolation(DomainError):
    """The dimensionless deformation m*hbar*omega_tilde*beta is not below 1."""


class ThermalRegimeViolation(DomainError):
    """The thermal wavelength does not exceed the minimal length."""


class UndeformedError(DomainError):
    """Operation only defined for a strictly positive deformation beta."""


class RegimeError(GupMagError):
    """An asymptotic closed form was requested outside its domain of validity."""


class RegimeWarning(UserWarning):
    """A result was computed outside the regime where it is expected to hold."""


class ConvergenceError(GupMagError, ArithmeticError):
    """A numerical procedure did not reach its requested tolerance."""


class DivergentMoment(GupMagError, ArithmeticError):
    """A momentum moment of a wavefunction is not finite."""


class TruncationError(ConvergenceError):
    """A truncated series could not be bounded below tolerance within its term cap."""


class GridTooCoarse(ConvergenceError):
    """The discretisation error is too large to classify a residual."""


class NonRealEigenvalue(ConvergenceError):
    """A discretised operator produced eigenvalues with non-negligible imaginary part."""


class RootNotBracketed(GupMagError):
    """A sign-change scan did not find the expected number of roots.

    Attributes
    ----------
    scan : list of (x, f(x)) pairs that were evaluated.
    """

    def __init__(self, message, scan=()):
        super().__init__(message)
        self.scan = list(scan)
