"""Exact finite Weil representation of Sp(2d, F_q), Maslov indices, Gauss-sum strata
and a genus-zero theta function."""

from .errors import LimitExceeded, NotScalar, TransversalityError
from .scalars import CycloNum, FqElem, gauss_sum, legendre, psi, sqrt_q
from .symplectic import GroupElem, Lagrangian, SympSpace

__version__ = "0.1.0"

__all__ = [
    "CycloNum", "FqElem", "GroupElem", "Lagrangian", "LimitExceeded", "NotScalar", "SympSpace",
    "TransversalityError", "gauss_sum", "legendre", "psi", "sqrt_q", "__version__",
]
