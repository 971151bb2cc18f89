"""Exact engine for polynomial representations of the strange Lie superalgebras."""

from .scalars import FieldMismatchError, Scalar
from .superpoly import Monomial, ParseError, SuperPolynomial, format_poly, parse

__all__ = [
    "FieldMismatchError",
    "Scalar",
    "Monomial",
    "ParseError",
    "SuperPolynomial",
    "format_poly",
    "parse",
]
