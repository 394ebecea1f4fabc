"""Finitely supported rational sequences and the operators acting on them.

A :class:`Seq` is a sparse map ``index -> value`` over the naturals; absent
indices are zero, and zero values are dropped on construction so that two
equal sequences always compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from hardycov.counting import RateLike, count_J
from hardycov.exact import (
    DomainError,
    Enclosure,
    RationalLike,
    ceil_to_dyadic,
    floor_to_dyadic,
    format_rational,
    nth_root_enclosure,
    parse_rational,
    to_rational,
)
from hardycov.reports import HOLDS, VIOLATED, Report


class MonotonicityViolation(ValueError):
    """Input was required to be non-increasing and nonnegative but is not."""


class SeqFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class Seq:
    """Immutable finitely supported sequence of rationals indexed from 0."""

    __slots__ = ("_entries", "_map")

    def __init__(self, entries: Mapping[int, RationalLike] | Iterable[tuple[int, RationalLike]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        merged: dict[int, Fraction] = {}
        for idx, value in items:
            if not isinstance(idx, int) or isinstance(idx, bool) or idx < 0:
                raise ValueError(f"index must be a natural number, got {idx!r}")
            if idx in merged:
                raise ValueError(f"duplicate index {idx}")
            merged[idx] = to_rational(value)
        self._entries = tuple((i, merged[i]) for i in sorted(merged) if merged[i] != 0)
        self._map = dict(self._entries)

    @classmethod
    def from_values(cls, values: Iterable[RationalLike]) -> "Seq":
        """Dense constructor: ``values[k]`` goes to index ``k``."""
        return cls(enumerate(values))

    @property
    def entries(self) -> tuple[tuple[int, Fraction], ...]:
        return self._entries

    @property
    def support_max(self) -> int | None:
        """Largest index with a nonzero value; ``None`` for the zero sequence."""
        return self._entries[-1][0] if self._entries else None

    @property
    def length(self) -> int:
        """``support_max + 1``, or 0 when empty."""
        return 0 if not self._entries else self._entries[-1][0] + 1

    def __getitem__(self, idx: int) -> Fraction:
        return self._map.get(idx, Fraction(0))

    def __iter__(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Seq):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(self._entries)

    def __repr__(self) -> str:
        inner = ", ".join(f"{i}: {format_rational(v)}" for i, v in self._entries)
        return f"Seq({{{inner}}})"

    def dense(self, length: int | None = None) -> list[Fraction]:
        n = self.length if length is None else length
        return [self[k] for k in range(n)]

    def abs(self) -> "Seq":
        return Seq((i, abs(v)) for i, v in self._entries)

    def __add__(self, other: "Seq") -> "Seq":
        out = dict(self._map)
        for i, v in other:
            out[i] = out.get(i, Fraction(0)) + v
        return Seq(out)

    def scale(self, c: RationalLike) -> "Seq":
        c = to_rational(c)
        return Seq((i, c * v) for i, v in self._entries)

    def is_nonincreasing_nonneg(self) -> bool:
        """True when ``|a_0| = a_0 >= a_1 >= ... >= 0`` with zeros counted."""
        expected = 0
        prev: Fraction | None = None
        for i, v in self._entries:
            # a gap means a zero value followed by a positive one
            if i != expected or v < 0 or (prev is not None and v > prev):
                return False
            prev = v
            expected = i + 1
        return True

    def to_record(self) -> dict[str, str]:
        return {str(i): format_rational(v) for i, v in self._entries}


def require_monotone(a: Seq) -> None:
    if not a.is_nonincreasing_nonneg():
        raise MonotonicityViolation(f"sequence is not non-increasing and nonnegative: {a!r}")


# -- file format -----------------------------------------------------------


def parse_seq(text: str) -> Seq:
    """Parse ``<index> <rational>`` lines; ``#`` starts a comment line."""
    entries = []
    last = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SeqFormatError(f"expected '<index> <rational>', got {raw!r}", lineno)
        try:
            idx = int(parts[0])
        except ValueError:
            raise SeqFormatError(f"bad index {parts[0]!r}", lineno) from None
        if idx < 0:
            raise SeqFormatError(f"negative index {idx}", lineno)
        if idx <= last:
            raise SeqFormatError(f"indices must be strictly increasing ({idx} after {last})", lineno)
        try:
            value = parse_rational(parts[1])
        except ValueError as exc:
            raise SeqFormatError(str(exc), lineno) from None
        entries.append((idx, value))
        last = idx
    return Seq(entries)


def load_seq(path: str | Path) -> Seq:
    return parse_seq(Path(path).read_text(encoding="utf-8"))


def format_seq(a: Seq) -> str:
    return "".join(f"{i} {format_rational(v)}\n" for i, v in a)


# -- exponents -------------------------------------------------------------


@dataclass(frozen=True)
class PNorm:
    """Exponent ``p >= 1`` together with its conjugate ``p/(p-1)``."""

    p: Fraction

    def __post_init__(self) -> None:
        p = to_rational(self.p)
        if p < 1:
            raise DomainError(f"p must be >= 1, got {p}")
        object.__setattr__(self, "p", p)

    @property
    def conjugate(self) -> Fraction | None:
        """``p/(p-1)``; ``None`` stands for infinity at ``p = 1``."""
        if self.p == 1:
            return None
        return self.p / (self.p - 1)

    @property
    def is_integer(self) -> bool:
        return self.p.denominator == 1


def as_pnorm(p: PNorm | RationalLike) -> PNorm:
    return p if isinstance(p, PNorm) else PNorm(to_rational(p))


# -- sums and norms --------------------------------------------------------


def lp_power_sum(a: Seq, p: int) -> Fraction:
    """Exact ``sum |a_n|**p`` for integer ``p >= 1``."""
    if p < 1 or int(p) != p:
        raise DomainError("p must be a positive integer")
    p = int(p)
    return sum((abs(v) ** p for _, v in a), Fraction(0))


def _power_enclosure(x: Fraction, p: Fraction, eps: Fraction) -> Enclosure:
    """Enclose ``x**p`` for ``x >= 0`` and rational ``p = u/v``: ``(x**u)**(1/v)``."""
    return nth_root_enclosure(x**p.numerator, p.denominator, eps)


def lp_norm(a: Seq, p: PNorm | RationalLike, eps: RationalLike = Fraction(1, 10**9)) -> Enclosure:
    """Enclosure of ``(sum |a_n|**p)**(1/p)`` with width at most ``eps``.

    For non-integer ``p`` each ``|a_n|**p`` is enclosed first and the sum is
    rounded outward; the inner tolerance is tightened until the final width
    fits.
    """
    pn = as_pnorm(p)
    eps = to_rational(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    p = pn.p
    u, v = p.numerator, p.denominator
    if pn.is_integer:
        return nth_root_enclosure(lp_power_sum(a, u), u, eps)
    inner = eps / (len(a) + 1)
    while True:
        lo = Fraction(0)
        hi = Fraction(0)
        for _, value in a:
            enc = _power_enclosure(abs(value), p, inner)
            lo += enc.lower
            hi += enc.upper
        # norm = S**(1/p) = (S**v)**(1/u); monotone in S
        bits = inner.denominator.bit_length() + 8
        lo_root = nth_root_enclosure(floor_to_dyadic(lo, bits) ** v, u, inner).lower
        hi_root = nth_root_enclosure(ceil_to_dyadic(hi, bits) ** v, u, inner).upper
        if hi_root - lo_root <= eps:
            return Enclosure(lo_root, hi_root)
        inner /= 16


# -- Cesàro mean -----------------------------------------------------------


def cesaro(a: Seq, n_max: int) -> Seq:
    """``A_n = (a_0 + ... + a_n)/(n+1)`` for ``n <= n_max``, one prefix-sum pass."""
    out = []
    running = Fraction(0)
    for n in range(n_max + 1):
        running += a[n]
        out.append((n, running / (n + 1)))
    return Seq(out)


def cesaro_tail_bound(total: RationalLike, M: int, p: int) -> Fraction:
    """Upper bound ``total**p * M**(1-p) / (p-1)`` for ``sum_{n>=M} (total/(n+1))**p``."""
    total = to_rational(total)
    if total < 0:
        raise DomainError("total must be nonnegative")
    if M < 1:
        raise DomainError("M must be >= 1")
    if p < 2:
        raise DomainError("p must be >= 2")
    return total**p * Fraction(1, M ** (p - 1)) / (p - 1)


# -- rearrangement ---------------------------------------------------------


def rearrange_nonincreasing(a: Seq) -> Seq:
    """``|a_n|`` sorted descending and packed at indices ``0..count-1``."""
    return Seq.from_values(sorted((abs(v) for _, v in a), reverse=True))


def partial_sum_domination_check(a: Seq, n_max: int) -> Report:
    """Check ``sum_{k<=n} |a_k| <= sum_{k<=n} a*_k`` for every ``n <= n_max``."""
    star = rearrange_nonincreasing(a)
    left = Fraction(0)
    right = Fraction(0)
    first_failure = None
    equal_at = 0
    for n in range(n_max + 1):
        left += abs(a[n])
        right += star[n]
        if left > right and first_failure is None:
            first_failure = n
        if left == right:
            equal_at += 1
    return Report(
        check="partial_sum_domination",
        status=HOLDS if first_failure is None else VIOLATED,
        lhs=left,
        rhs=right,
        details={"n_max": n_max, "first_failure": first_failure, "equal_prefixes": equal_at},
    )


# -- summation by parts ----------------------------------------------------


def abel_step1_check(a_monotone: Seq, s: RateLike) -> Report:
    """``sum_m |a_m| (J_{m+1} - J_m) == sum_m J_{m+1} (|a_m| - |a_{m+1}|)``, both sides summed directly."""
    require_monotone(a_monotone)
    top = a_monotone.length  # |a_m| = 0 for m >= top
    lhs = Fraction(0)
    rhs = Fraction(0)
    for m in range(top + 1):
        j_next = count_J(m + 1, s)
        am = abs(a_monotone[m])
        lhs += am * (j_next - count_J(m, s))
        rhs += j_next * (am - abs(a_monotone[m + 1]))
    return Report(
        check="abel_step1",
        status=HOLDS if lhs == rhs else VIOLATED,
        lhs=lhs,
        rhs=rhs,
    )


def abel_step2_check(a_monotone: Seq) -> Report:
    """``sum_m (m+1)(|a_m| - |a_{m+1}|) == sum_m |a_m|``."""
    require_monotone(a_monotone)
    lhs = Fraction(0)
    for m in range(a_monotone.length + 1):
        lhs += (m + 1) * (abs(a_monotone[m]) - abs(a_monotone[m + 1]))
    rhs = sum((abs(v) for _, v in a_monotone), Fraction(0))
    return Report(
        check="abel_step2",
        status=HOLDS if lhs == rhs else VIOLATED,
        lhs=lhs,
        rhs=rhs,
    )
