"""Exact computations with quadratic Lie algebras: Weil algebras, quantization,
the Duflo map, cubic Dirac elements and Harish-Chandra projections."""

from .core import Element
from .liealg import InputError, QuadraticLieAlgebra, catalog, get, load, validate

__all__ = ["Element", "InputError", "QuadraticLieAlgebra", "catalog", "get", "load",
           "validate"]
__version__ = "0.1.0"
