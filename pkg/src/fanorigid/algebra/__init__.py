"""Exact polynomial and ideal arithmetic over the rationals and prime fields."""

from .fields import DEFAULT_PRIME, GF, QQ, PrimeField, RationalField, default_prime, is_prime
from .groebner import (
    GroebnerBasis,
    Ideal,
    dimension,
    groebner,
    ideal_dimension,
    is_regular_sequence,
    regular_sequence_witness,
)
from .polynomial import Polynomial, graded_part, random_homogeneous, recenter
from .textio import ParseError, format_polynomial, parse_polynomial

__all__ = [
    "DEFAULT_PRIME",
    "GF",
    "QQ",
    "PrimeField",
    "RationalField",
    "default_prime",
    "is_prime",
    "GroebnerBasis",
    "Ideal",
    "dimension",
    "groebner",
    "ideal_dimension",
    "is_regular_sequence",
    "regular_sequence_witness",
    "Polynomial",
    "graded_part",
    "random_homogeneous",
    "recenter",
    "ParseError",
    "format_polynomial",
    "parse_polynomial",
]
