"""Exception types shared across the package."""


class OpcalcError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(OpcalcError):
    """Bad input text.  Carries the offset and what was expected there."""

    def __init__(self, message, position=None, expected=()):
        super().__init__(message)
        self.position = position
        self.expected = tuple(expected)


class InvertError(OpcalcError):
    """Series has no multiplicative inverse (constant term not a unit)."""


class ReverseError(OpcalcError):
    """Series has no compositional inverse (order is not exactly 1)."""


class TruncationError(OpcalcError):
    """A truncated series is too short for the requested exact computation."""


class NotDegreeReducing(OpcalcError):
    """Operator fails the degree-reducing test.  `degree` is the first witness."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class NotDelta(OpcalcError):
    """Series symbol does not have order exactly 1."""


class NotDX(OpcalcError):
    """Operator has a non-polynomial diagonal; no DX-expansion exists."""


class NotDXEligible(OpcalcError):
    """Umbral operator with Px != 1; no DX-expansion exists."""


class NegativePowerViolation(OpcalcError):
    """Diagonal fit for t < 0 produced coefficients below the X^0 floor."""


class WindowTooSmall(OpcalcError):
    """Sampling window cannot support the requested slack."""


class NoCertificate(OpcalcError):
    """Operation requires a convergence certificate that is absent or too weak."""


class MissingVanishingCertificate(OpcalcError):
    """Diagonal family has nonzero entries above its declared vanishing bound."""
