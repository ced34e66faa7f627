"""Exact-arithmetic toolkit for homology representations of automorphism
groups of free groups and right-angled Artin groups on finite covers.

Everything is computed over Q or a cyclotomic field with exact arithmetic;
no floating point is used anywhere.
"""

from coverrep.errors import (
    CapExceeded,
    CoverRepError,
    LiftError,
    NotACycle,
    QCompatibilityError,
    UnknownVertex,
)

__all__ = [
    "CoverRepError",
    "UnknownVertex",
    "CapExceeded",
    "QCompatibilityError",
    "NotACycle",
    "LiftError",
]

__version__ = "0.1.0"
