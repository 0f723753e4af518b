"""Define the errors raised by the program."""


class SmallhouseError(Exception):
    """Base class of the program errors."""


class InvalidLevelError(SmallhouseError, ValueError):
    """Raised when an element or an operation is given an unusable level."""


class NotCoprimeError(SmallhouseError, ValueError):
    """Raised when a unit modulo m was expected but the gcd is not 1."""


class NotTotallyRealError(SmallhouseError, ValueError):
    """Raised when a castle target is not fixed by complex conjugation."""


class TrigCertificationError(SmallhouseError):
    """Raised when a binary64 trigonometric table misses its error bound."""


class FixtureError(SmallhouseError):
    """Raised when the table fixtures can't be loaded or are inconsistent."""
