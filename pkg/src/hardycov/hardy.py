"""Discrete Hardy inequality: certified instances, the Minkowski step, sharpness.

Exact paths (``ingham_integral``, ``verify_hardy``, ``minkowski_rhs_lower``)
use rationals only. ``sharpness_sweep`` needs transcendental powers and runs
on outward-rounded intervals; ``cesaro_norm2`` is plain floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from mpmath import iv
from mpmath.libmp import to_rational as _mpf_to_rational

from hardycov.counting import Rate, count_I
from hardycov.exact import (
    DomainError,
    Enclosure,
    RationalLike,
    ceil_div,
    floor_to_dyadic,
    nth_root_enclosure,
    to_rational,
)
from hardycov.reports import INCONCLUSIVE, VERIFIED, HardyReport, Report, _render
from hardycov.sequences import (
    PNorm,
    Seq,
    as_pnorm,
    cesaro,
    cesaro_tail_bound,
    lp_norm,
    lp_power_sum,
    require_monotone,
)

DEFAULT_S_MIN = Fraction(1, 100)
DEFAULT_EPS = Fraction(1, 10**9)


class ConjugateUndefined(DomainError):
    """``p = 1`` has no finite conjugate exponent."""


def hardy_constant(p: PNorm | RationalLike) -> Fraction:
    """The sharp constant ``p/(p-1)``."""
    pn = as_pnorm(p)
    if pn.conjugate is None:
        raise ConjugateUndefined("p = 1 has no finite conjugate")
    return pn.conjugate


# -- Ingham representation -------------------------------------------------


def ingham_integral(a: Seq, n: int) -> Fraction:
    """``∫_0^1 a_[(n+1)s] ds`` by its breakpoints ``k/(n+1)``.

    The integrand equals ``a_k`` on ``[k/(n+1), (k+1)/(n+1))``. The result is
    checked against the Cesàro mean ``A_n``; a mismatch raises.
    """
    if n < 0:
        raise DomainError("n must be a natural number")
    cuts = [Fraction(k, n + 1) for k in range(n + 2)]
    value = Fraction(0)
    for k in range(n + 1):
        value += a[k] * (cuts[k + 1] - cuts[k])
    if value != cesaro(a, n)[n]:
        raise AssertionError(f"Ingham integral {value} differs from the Cesàro mean at n={n}")
    return value


# -- Minkowski step --------------------------------------------------------


@dataclass(frozen=True)
class Breakpoints:
    cuts: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if any(x >= y for x, y in zip(self.cuts, self.cuts[1:])):
            raise ValueError("cuts must be strictly increasing")

    def __len__(self) -> int:
        return len(self.cuts)

    def __iter__(self):
        return iter(self.cuts)


def _check_s_min(s_min: Fraction) -> None:
    if not 0 < s_min < 1:
        raise DomainError(f"s_min must lie in (0, 1), got {s_min}")


def required_n_cap(support_max: int, s_min: RationalLike) -> int:
    s_min = to_rational(s_min)
    return ceil_div((support_max + 1) * s_min.denominator, s_min.numerator)


@lru_cache(maxsize=64)
def _breakpoints(support_max: int, s_min: Fraction, n_cap: int) -> Breakpoints:
    cuts = set()
    for m in range(1, support_max + 2):
        # s_min < m/n <= 1  <=>  m <= n < m/s_min
        n_hi = min(n_cap, ceil_div(m * s_min.denominator, s_min.numerator) - 1)
        for n in range(m, n_hi + 1):
            cuts.add(Fraction(m, n))
    return Breakpoints(tuple(sorted(cuts)))


def enumerate_breakpoints(support_max: int, s_min: RationalLike, n_cap: int) -> Breakpoints:
    """All ``m/n`` in ``(s_min, 1]`` with ``1 <= n <= n_cap`` and ``1 <= m <= support_max + 1``.

    Between consecutive cuts every ``floor(n*s)`` that can land in
    ``0..support_max`` is constant.
    """
    s_min = to_rational(s_min)
    _check_s_min(s_min)
    if n_cap < required_n_cap(support_max, s_min):
        raise DomainError(f"n_cap must be at least {required_n_cap(support_max, s_min)}")
    return _breakpoints(support_max, s_min, n_cap)


def minkowski_rhs_lower(
    a: Seq,
    p: int,
    s_min: RationalLike = DEFAULT_S_MIN,
    eps: RationalLike = DEFAULT_EPS,
) -> Fraction:
    """Certified lower bound for ``∫_0^1 (sum_{n>=1} |a_[ns]|**p)**(1/p) ds``.

    The integral is restricted to ``[s_min, 1]`` (the integrand is
    nonnegative) and split at the breakpoints, where the inner power sum is
    constant and is evaluated exactly at each interval midpoint. The p-th
    root is taken from below and every term is rounded down, so the total
    undershoots the truncated integral by at most ``eps``.
    """
    s_min = to_rational(s_min)
    eps = to_rational(eps)
    _check_s_min(s_min)
    if p < 1:
        raise DomainError("p must be a positive integer")
    top = a.support_max
    if top is None:
        return Fraction(0)
    weights = [abs(a[m]) ** p for m in range(top + 2)]
    # integer weights over a common denominator keep the inner loop in ints
    denom = math.lcm(*(w.denominator for w in weights))
    int_w = [w.numerator * (denom // w.denominator) for w in weights]
    # sum_m w_m #I_m(s) = sum_{m>=1} #J_m(s) (w_{m-1} - w_m), with w_{top+1} = 0
    diffs = [(m, int_w[m - 1] - int_w[m]) for m in range(1, top + 2) if int_w[m - 1] != int_w[m]]
    bp = _breakpoints(top, s_min, required_n_cap(top, s_min))
    points = (s_min, *bp.cuts)
    n_pieces = len(points) - 1
    # half of eps for the roots, half for flooring each term
    root_eps = eps / 2
    bits = math.ceil(2 * n_pieces / eps).bit_length() + 1
    total = Fraction(0)
    for lo, hi in zip(points, points[1:]):
        # midpoint P/Q; #J_m = ceil(m/mid) - 1, and m/mid is never an integer here
        P = lo.numerator * hi.denominator + hi.numerator * lo.denominator
        Q = 2 * lo.denominator * hi.denominator
        inner = 0
        for m, d in diffs:
            inner += d * (-((-m * Q) // P) - 1)
        if inner == 0:
            continue
        root = nth_root_enclosure(Fraction(inner, denom), p, root_eps).lower
        total += floor_to_dyadic(root * (hi - lo), bits)
    return total


def minkowski_inner_sum(a: Seq, p: int, s: RationalLike) -> Fraction:
    """``sum_{n>=1} |a_[ns]|**p`` at a single rate, through the preimage counts."""
    r = Rate(to_rational(s))
    return sum((abs(v) ** p * count_I(m, r) for m, v in a), Fraction(0))


def verify_minkowski_step(
    a: Seq,
    p: int,
    M: int,
    s_min: RationalLike = DEFAULT_S_MIN,
    eps: RationalLike = DEFAULT_EPS,
) -> Report:
    """``(sum_{n<=M} |A_n|**p)**(1/p) <= ∫_0^1 (sum_{n>=1} |a_[ns]|**p)**(1/p) ds`` for monotone ``a``.

    Only a lower bound of the right side is available, so the outcome is
    ``verified`` or ``inconclusive``; it is never reported as violated.
    """
    require_monotone(a)
    s_min = to_rational(s_min)
    lhs = lp_norm(cesaro(a, M), p, eps)
    rhs = minkowski_rhs_lower(a, p, s_min, eps)
    details: dict = {"p": p, "M": M, "s_min": s_min, "lhs_enclosure": lhs}
    if lhs.upper <= rhs:
        status = VERIFIED
    else:
        status = INCONCLUSIVE
        details["gap"] = lhs.upper - rhs
        details["suggested_s_min"] = s_min / 2
    return Report(check="minkowski_step", status=status, lhs=lhs.upper, rhs=rhs, details=details)


# -- Hardy inequality ------------------------------------------------------


def verify_hardy(a: Seq, p: int, M: int) -> HardyReport:
    """Exact check of ``sum_n |A_n|**p <= (p/(p-1))**p * sum_n |a_n|**p``.

    The left side is the sum over ``n < M`` plus the integral-test bound on
    the tail; past the support ``|A_n| <= (sum_k |a_k|)/(n+1)``.
    """
    if p < 2 or int(p) != p:
        raise DomainError("p must be an integer >= 2")
    p = int(p)
    if M < max(1, a.length):
        raise DomainError(f"M must be at least support_max + 1 = {a.length}")
    head = Fraction(0)
    running = Fraction(0)
    for n in range(M):
        running += a[n]
        head += abs(running / (n + 1)) ** p
    total = sum((abs(v) for _, v in a), Fraction(0))
    tail = cesaro_tail_bound(total, M, p)
    lhs = head + tail
    rhs = hardy_constant(p) ** p * lp_power_sum(a, p)
    return HardyReport(lhs_power_sum=lhs, rhs_power_sum=rhs, holds=lhs <= rhs, M=M, tail_bound=tail, p=p)


# -- sharpness of the constant ---------------------------------------------


@dataclass(frozen=True)
class SharpnessRow:
    eps: Fraction
    N: int
    ratio: Enclosure
    p_prime: Fraction

    def to_record(self) -> dict:
        return {
            "kind": "sharpness",
            "eps": _render(self.eps),
            "N": self.N,
            "ratio": _render(self.ratio),
            "p_prime": _render(self.p_prime),
        }


def _iv_bounds(x) -> tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return Fraction(*_mpf_to_rational(lo)), Fraction(*_mpf_to_rational(hi))


def _iv_frac(q: Fraction):
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def _ratio_interval(p: int, eps: Fraction, N: int):
    exponent = _iv_frac(Fraction(1, p) + eps)
    prefix = iv.mpf(0)
    num = iv.mpf(0)
    den = iv.mpf(0)
    for n in range(N + 1):
        a_n = iv.exp(-exponent * iv.log(n + 1))
        prefix += a_n
        den += a_n**p
        num += (prefix / (n + 1)) ** p
    q = num / den
    return iv.sqrt(q) if p == 2 else iv.exp(iv.log(q) / p)


def sharpness_ratio(p: int, eps: RationalLike, N: int, prec: RationalLike = DEFAULT_EPS) -> Enclosure:
    """Enclosure of ``||C a||_p / ||a||_p`` for ``a_n = (n+1)**(-1/p - eps)``, ``n <= N``.

    ``C a`` is truncated at index ``N`` as well. Working precision doubles
    until the enclosure is narrower than ``prec``.
    """
    eps = to_rational(eps)
    prec = to_rational(prec)
    if eps <= 0:
        raise DomainError("eps must be positive")
    bits = max(64, math.ceil(math.log2(prec.denominator / prec.numerator)) + 32)
    saved = iv.prec
    try:
        while True:
            iv.prec = bits
            lo, hi = _iv_bounds(_ratio_interval(p, eps, N))
            if hi - lo <= prec:
                return Enclosure(lo, hi)
            bits *= 2
    finally:
        iv.prec = saved


def _sweep_cell(p: int, eps: Fraction, N: int, prec: Fraction) -> SharpnessRow:
    return SharpnessRow(eps=eps, N=N, ratio=sharpness_ratio(p, eps, N, prec), p_prime=hardy_constant(p))


def sharpness_sweep(
    p: int,
    eps_list: Sequence[RationalLike],
    N: int,
    prec: RationalLike = DEFAULT_EPS,
    map_fn: Callable = map,
) -> list[SharpnessRow]:
    """One row per ``eps``, in the order given."""
    eps_values = [to_rational(e) for e in eps_list]
    if len(set(eps_values)) != len(eps_values):
        raise DomainError("eps values must be distinct")
    if any(e <= 0 for e in eps_values):
        raise DomainError("eps values must be positive")
    prec = to_rational(prec)
    k = len(eps_values)
    return list(map_fn(_sweep_cell, [p] * k, eps_values, [N] * k, [prec] * k))


def sweep_is_increasing(rows: Sequence[SharpnessRow]) -> bool:
    """Ratios strictly increase as ``eps`` decreases, judged on disjoint enclosures."""
    ordered = sorted(rows, key=lambda r: r.eps, reverse=True)
    return all(x.ratio.upper < y.ratio.lower for x, y in zip(ordered, ordered[1:]))


# -- truncated Cesàro operator at p = 2 ------------------------------------


def cesaro_matvec(x: np.ndarray, N: int | None = None) -> np.ndarray:
    """``y_n = (x_0 + ... + x_n)/(n+1)``."""
    x = np.asarray(x, dtype=np.float64)
    if N is not None and x.shape[0] != N + 1:
        raise DomainError(f"expected {N + 1} entries, got {x.shape[0]}")
    return np.cumsum(x) / np.arange(1, x.shape[0] + 1)


def cesaro_rmatvec(y: np.ndarray) -> np.ndarray:
    """Adjoint: ``z_k = sum_{n>=k} y_n/(n+1)``."""
    y = np.asarray(y, dtype=np.float64)
    w = y / np.arange(1, y.shape[0] + 1)
    return np.cumsum(w[::-1])[::-1]


def cesaro_dense(N: int) -> np.ndarray:
    n = np.arange(N + 1)
    return np.tril(np.ones((N + 1, N + 1))) / (n + 1)[:, None]


@dataclass(frozen=True)
class NormEstimate:
    sigma: float
    residual: float
    iterations: int


def cesaro_norm2(N: int, iters: int = 10_000, tol: float = 1e-12) -> NormEstimate:
    """Largest singular value of the ``(N+1) x (N+1)`` Cesàro matrix by power iteration.

    Iterates ``x <- C^T C x`` from the all-ones vector. The reported
    ``sigma = ||C x||`` for unit ``x`` never exceeds the true norm.
    ``residual`` is ``||C^T C x - sigma^2 x|| / sigma^2`` at the last iterate.
    """
    if N < 0:
        raise DomainError("N must be a natural number")
    x = np.ones(N + 1) / math.sqrt(N + 1)
    residual = math.inf
    it = 0
    for it in range(1, iters + 1):
        y = cesaro_matvec(x)
        sigma2 = float(y @ y)
        z = cesaro_rmatvec(y)
        residual = float(np.linalg.norm(z - sigma2 * x)) / sigma2
        x = z / np.linalg.norm(z)
        if residual < tol:
            break
    sigma = float(np.linalg.norm(cesaro_matvec(x)))
    return NormEstimate(sigma=sigma, residual=residual, iterations=it)

