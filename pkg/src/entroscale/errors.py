"""Typed errors shared across the package.

Every failure mode that callers are expected to catch has its own class;
everything derives from :class:`EntroscaleError` so a driver can catch the
whole family at once.
"""


class EntroscaleError(Exception):
    """Base class for all package-specific errors."""


class ZeroPolynomial(EntroscaleError):
    """Root isolation was asked for the identically vanishing polynomial."""


class OnZeroSet(EntroscaleError):
    """A quantity was evaluated at an angle where |u| vanishes."""


class WrongCase(EntroscaleError):
    """The model's spectral case does not support the requested operation."""


class NoConvergence(EntroscaleError):
    """Fourier coefficients failed their doubling certificate."""


class MissingLags(EntroscaleError):
    """A Toeplitz section was requested beyond the cached coefficient range."""


class PairingFailure(EntroscaleError):
    """A spectrum expected to be symmetric (+/-) failed to pair up."""


class OutOfRange(EntroscaleError):
    """An eigenvalue left its admissible interval by more than the tolerance."""


class TooLarge(EntroscaleError):
    """A brute-force construction was requested beyond its size guard."""


class NotAntisymmetric(EntroscaleError):
    """A Pfaffian was requested for a matrix that is not antisymmetric."""


class AxiomViolation(EntroscaleError):
    """An exact algebraic identity failed beyond tolerance."""


class QuadratureFailure(EntroscaleError):
    """Adaptive quadrature did not reach the requested tolerance."""


class NotSymmetric(EntroscaleError):
    """A symmetry precondition (matrix or model) does not hold."""


class WrongFermi(EntroscaleError):
    """An operation specific to one occupation-function family got another."""
