"""Exception types shared across the package."""


class CoverRepError(Exception):
    """Base class for all domain errors raised by this package."""


class UnknownVertex(CoverRepError, KeyError):
    """A vertex or generator name is not declared in the ambient object."""


class CapExceeded(CoverRepError):
    """A closure or enumeration grew past the caller-supplied cap."""


class QCompatibilityError(CoverRepError):
    """An automorphism does not commute with the finite quotient map."""


class NotACycle(CoverRepError):
    """A chain expected to have zero boundary does not."""


class LiftError(CoverRepError):
    """A chain cannot be lifted with the required support or coefficients."""
