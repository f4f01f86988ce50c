"""Primitive rate-compatible LDPC codes built from Golomb-ruler primitive polynomials."""
from .gf2poly import BinaryPolynomial, is_primitive, parse_polynomial, reciprocal
from .ruler import RulerProfile, design_quality, is_golomb, profile

__version__ = "0.1.0"

__all__ = [
    "BinaryPolynomial",
    "RulerProfile",
    "design_quality",
    "is_golomb",
    "is_primitive",
    "parse_polynomial",
    "profile",
    "reciprocal",
]
