"""Exact scalar substrate: rationals, floors of rational products, root enclosures.

Rationals are :class:`fractions.Fraction`; they are always reduced and have a
positive denominator, which is all the rest of the package relies on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:/(\d+))?\s*$")


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


def parse_rational(text: str) -> Fraction:
    """Parse ``<sign?><digits>/<digits>`` or ``<sign?><digits>``.

    >>> parse_rational("-6/4")
    Fraction(-3, 2)
    """
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"malformed rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def to_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def format_rational(q: Fraction) -> str:
    """Render as ``num/den``; the denominator is always written."""
    return f"{q.numerator}/{q.denominator}"


def floor_div(a: int, b: int) -> int:
    return a // b


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def floor_prod(n: int, s: RationalLike) -> int:
    """``floor(n*s)`` for a natural ``n`` and rational ``s``, in integer arithmetic."""
    s = to_rational(s)
    return (n * s.numerator) // s.denominator


def pow_rational(q: RationalLike, k: int) -> Fraction:
    if k < 1:
        raise DomainError("exponent must be a positive integer")
    return to_rational(q) ** k


def iroot(n: int, p: int) -> int:
    """Largest integer ``r`` with ``r**p <= n``."""
    if n < 0:
        raise DomainError("iroot of a negative integer")
    if p < 1:
        raise DomainError("root order must be positive")
    if n < 2 or p == 1:
        return n
    # Newton from above; the initial guess is a power of two >= the root.
    x = 1 << -(-n.bit_length() // p)
    while True:
        y = ((p - 1) * x + n // x ** (p - 1)) // p
        if y >= x:
            break
        x = y
    while x**p > n:
        x -= 1
    while (x + 1) ** p <= n:
        x += 1
    return x


@dataclass(frozen=True)
class Enclosure:
    """Closed rational interval certified to contain a real quantity."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", to_rational(self.lower))
        object.__setattr__(self, "upper", to_rational(self.upper))
        if self.lower > self.upper:
            raise ValueError(f"empty enclosure [{self.lower}, {self.upper}]")

    @classmethod
    def point(cls, x: RationalLike) -> "Enclosure":
        x = to_rational(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def is_exact(self) -> bool:
        return self.lower == self.upper

    def contains(self, x: RationalLike) -> bool:
        x = to_rational(x)
        return self.lower <= x <= self.upper

    def __add__(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(self.lower + other.lower, self.upper + other.upper)

    def __str__(self) -> str:
        return f"[{format_rational(self.lower)}, {format_rational(self.upper)}]"


def _exact_root(x: Fraction, p: int) -> Fraction | None:
    rn = iroot(x.numerator, p)
    rd = iroot(x.denominator, p)
    if rn**p == x.numerator and rd**p == x.denominator:
        return Fraction(rn, rd)
    return None


def _dyadic_scale(eps: Fraction) -> int:
    """Smallest ``k`` with ``2**-k <= eps``."""
    num, den = eps.numerator, eps.denominator
    k = max(0, den.bit_length() - num.bit_length())
    while k > 0 and num << (k - 1) >= den:
        k -= 1
    while num << k < den:
        k += 1
    return k


def nth_root_enclosure(x: RationalLike, p: int, eps: RationalLike) -> Enclosure:
    """Enclose ``x**(1/p)`` in ``[lo, hi]`` with ``lo**p <= x <= hi**p``, ``hi - lo <= eps``.

    Exact roots (numerator and denominator both perfect ``p``-th powers) come
    back as point enclosures. Otherwise the ends are dyadic rationals.
    """
    x = to_rational(x)
    eps = to_rational(eps)
    if x < 0:
        raise DomainError("root of a negative rational")
    if eps <= 0:
        raise DomainError("eps must be positive")
    if p < 1:
        raise DomainError("root order must be a positive integer")
    exact = _exact_root(x, p)
    if exact is not None:
        return Enclosure(exact, exact)
    k = _dyadic_scale(eps)
    scale = 1 << k
    # floor((x * scale**p) ** (1/p)) == iroot(floor(x * scale**p), p)
    scaled = x.numerator * scale**p // x.denominator
    r = iroot(scaled, p)
    return Enclosure(Fraction(r, scale), Fraction(r + 1, scale))


def root_lower(x: Fraction, p: int, eps: Fraction) -> Fraction:
    return nth_root_enclosure(x, p, eps).lower


def root_upper(x: Fraction, p: int, eps: Fraction) -> Fraction:
    return nth_root_enclosure(x, p, eps).upper


def floor_to_dyadic(q: Fraction, k: int) -> Fraction:
    """Largest multiple of ``2**-k`` not exceeding ``q``."""
    return Fraction((q.numerator << k) // q.denominator, 1 << k)


def ceil_to_dyadic(q: Fraction, k: int) -> Fraction:
    return Fraction(ceil_div(q.numerator << k, q.denominator), 1 << k)
