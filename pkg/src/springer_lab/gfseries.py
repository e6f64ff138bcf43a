"""Finite fields and truncated series in one namespace.

A thin facade over :mod:`springer_lab.fields` and
:mod:`springer_lab.series`, which hold the implementations.
"""

from .fields import Field, FieldError, galois_field, hermitian_field, prime_field
from .series import (
    IndeterminateValuation,
    NotAUnit,
    PrecisionError,
    SeriesPolynomial,
    TruncatedSeries,
    berkowitz,
    determinant,
    resultant_valuation,
    sylvester_matrix,
)

__all__ = [
    "Field",
    "FieldError",
    "IndeterminateValuation",
    "NotAUnit",
    "PrecisionError",
    "SeriesPolynomial",
    "TruncatedSeries",
    "berkowitz",
    "determinant",
    "galois_field",
    "hermitian_field",
    "involution",
    "prime_field",
    "resultant_valuation",
    "sylvester_matrix",
]


def involution(x):
    """``a -> a^q`` on every coefficient of ``x``."""
    return x.involution()
