"""Counting functions for the floor-subsampling map ``n -> floor(n*s)``.

``count_I(m, s)`` counts the positive integers ``n`` with ``floor(n*s) == m``,
i.e. the naturals in ``[m/s, (m+1)/s)``; ``count_J(m, s)`` counts the
naturals in ``[0, m/s)``. Each has a closed form and a brute-force
enumeration; the two are kept separate so they can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from hardycov.exact import DomainError, RationalLike, ceil_div, format_rational, to_rational


@dataclass(frozen=True)
class Rate:
    """Exact positive subsampling rate ``s``."""

    value: Fraction

    def __post_init__(self) -> None:
        v = to_rational(self.value)
        if v <= 0:
            raise DomainError(f"rate must be positive, got {v}")
        object.__setattr__(self, "value", v)

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


RateLike = Rate | RationalLike


def as_rate(s: RateLike) -> Rate:
    return s if isinstance(s, Rate) else Rate(to_rational(s))


def _first_natural_at_least(x_num: int, x_den: int) -> int:
    """Smallest ``n >= 1`` with ``n >= x_num/x_den``."""
    return max(1, ceil_div(x_num, x_den))


def count_I(m: int, s: RateLike) -> int:
    """``#{n >= 1 : floor(n*s) == m}`` from the interval ``[m/s, (m+1)/s)``."""
    if m < 0:
        return 0
    r = as_rate(s)
    u, v = r.numerator, r.denominator
    lo = _first_natural_at_least(m * v, u)
    # last natural strictly below (m+1)/s
    hi = ceil_div((m + 1) * v, u) - 1
    return max(0, hi - lo + 1)


def count_J(m: int, s: RateLike) -> int:
    """``#([0, m/s) ∩ N)``: ``m/s - 1`` when ``m/s`` is an integer, else ``floor(m/s)``."""
    if m <= 0:
        return 0
    r = as_rate(s)
    q, rem = divmod(m * r.denominator, r.numerator)
    return q - 1 if rem == 0 else q


def count_I_enumerate(m: int, s: RateLike) -> int:
    r = as_rate(s)
    u, v = r.numerator, r.denominator
    count = 0
    n = 1
    while (n * u) // v <= m:
        if (n * u) // v == m:
            count += 1
        n += 1
    return count


def count_J_enumerate(m: int, s: RateLike) -> int:
    r = as_rate(s)
    u, v = r.numerator, r.denominator
    count = 0
    n = 1
    while n * u < m * v:  # n < m/s
        count += 1
        n += 1
    return count


def count_tables_enumerate(m_max: int, s: RateLike) -> tuple[list[int], list[int]]:
    """Both count tables for ``m = 0..m_max`` (``J`` up to ``m_max + 1``) in one pass over ``n``.

    Walks ``n = 1, 2, ...`` once, bucketing ``floor(n*s)``; this is the
    enumeration route used when many ``m`` are checked against one ``s``.
    """
    r = as_rate(s)
    u, v = r.numerator, r.denominator
    counts_I = [0] * (m_max + 1)
    n = 1
    while True:
        f = (n * u) // v
        if f > m_max:
            break
        counts_I[f] += 1
        n += 1
    # J_m counts n with n*s < m, i.e. floor(n*s) <= m-1
    counts_J = [0] * (m_max + 2)
    running = 0
    for m in range(1, m_max + 2):
        running += counts_I[m - 1]
        counts_J[m] = running
    return counts_I, counts_J


def identity_failures(m_max: int, s: RateLike) -> list[dict]:
    """Every ``m <= m_max`` where a counting identity fails at rate ``s``.

    Checked: ``#I_m = #J_{m+1} - #J_m``; ``#J_m < m/s`` for ``m >= 1``; and
    both closed forms against the enumeration tables.
    """
    r = as_rate(s)
    u, v = r.numerator, r.denominator
    counts_I, counts_J = count_tables_enumerate(m_max, r)
    problems = []
    for m in range(m_max + 1):
        ci, cj, cj1 = count_I(m, r), count_J(m, r), count_J(m + 1, r)
        failed = []
        if ci != cj1 - cj:
            failed.append("I_m = J_m+1 - J_m")
        if m >= 1 and not cj * u < m * v:
            failed.append("J_m < m/s")
        if ci != counts_I[m] or cj != counts_J[m] or cj1 != counts_J[m + 1]:
            failed.append("closed form vs enumeration")
        if failed:
            problems.append({"m": m, "s": format_rational(r.value), "failed": failed})
    return problems
