"""Exact-arithmetic checks of the discrete change-of-variable estimate and the discrete Hardy inequality."""

from hardycov.counting import Rate, count_I, count_J
from hardycov.exact import DomainError, Enclosure, floor_prod, nth_root_enclosure, parse_rational, pow_rational
from hardycov.sequences import MonotonicityViolation, PNorm, Seq

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "Enclosure",
    "MonotonicityViolation",
    "PNorm",
    "Rate",
    "Seq",
    "count_I",
    "count_J",
    "floor_prod",
    "nth_root_enclosure",
    "parse_rational",
    "pow_rational",
]
