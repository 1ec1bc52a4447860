"""Generalized quantum cluster algebras: exact arithmetic and verification."""

from .errors import DimensionMismatch, NotCompatible, NotDivisible, PreconditionFailed
from .qcoeff import QLaurent
from .qtorus import SkewMatrix, TorusElement

__version__ = "0.1.0"
