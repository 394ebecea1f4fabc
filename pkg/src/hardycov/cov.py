"""Discrete change of variable: ``s * sum_{n>=1} |a_[ns]|`` against ``sum_n |a_n|``.

The subsampled sum is computed two ways (walking ``n`` directly, and
weighting each ``|a_m|`` by the size of its preimage ``I_m(s)``). The
continuum counterpart is evaluated exactly for the step function
``x -> |a_[x]|``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

from hardycov.counting import Rate, RateLike, as_rate, count_I
from hardycov.reports import HOLDS, VIOLATED, CovReport, Report
from hardycov.sequences import Seq, lp_power_sum
from hardycov.sequences import require_monotone as _check_monotone

PROBE_SEQ = Seq({2: 1})
PROBE_RATE = Rate(Fraction(2, 3))


def _subsample_hits(a: Seq, r: Rate) -> tuple[Fraction, int]:
    """Walk ``n = 1, 2, ...`` while ``floor(n*s)`` can still land in the support."""
    top = a.support_max
    if top is None:
        return Fraction(0), 0
    u, v = r.numerator, r.denominator
    total = Fraction(0)
    hits = 0
    n = 1
    while True:
        idx = (n * u) // v
        if idx > top:
            break
        value = a[idx]
        if value:
            total += abs(value)
            hits += 1
        n += 1
    return total, hits


def subsampled_sum_direct(a: Seq, s: RateLike) -> Fraction:
    """``sum_{n>=1} |a_{floor(n s)}|`` by iterating over ``n``."""
    return _subsample_hits(a, as_rate(s))[0]


def subsampled_sum_via_counts(a: Seq, s: RateLike) -> Fraction:
    """``sum_m |a_m| * #I_m(s)`` over the support of ``a``."""
    r = as_rate(s)
    return sum((abs(v) * count_I(m, r) for m, v in a), Fraction(0))


def verify_change_of_variable(a: Seq, s: RateLike, require_monotone: bool = False) -> CovReport:
    """Compare ``s * sum_{n>=1} |a_[ns]|`` with ``sum |a_n|`` exactly.

    With ``require_monotone`` the sequence must be non-increasing and
    nonnegative, and the inequality is then a theorem. Without it the result
    may legitimately come back with ``holds=False``.
    """
    r = as_rate(s)
    if require_monotone:
        _check_monotone(a)
    total, hits = _subsample_hits(a, r)
    lhs = r.value * total
    rhs = lp_power_sum(a, 1)
    return CovReport(lhs=lhs, rhs=rhs, holds=lhs <= rhs, slack=rhs - lhs, n_terms=hits, s=r.value, seq=a)


# -- falsification ---------------------------------------------------------


def _trial_rng(seed: int, k: int) -> random.Random:
    # string seeds hash through sha512, so this is stable across runs and hosts
    return random.Random(f"hardycov-fuzz:{seed}:{k}")


def random_rate(rng: random.Random, den_max: int, s_max: int = 4) -> Fraction:
    """Uniform over ``(0, s_max]`` fractions with denominator at most ``den_max``."""
    den = rng.randint(1, den_max)
    return Fraction(rng.randint(1, s_max * den), den)


def random_general_seq(rng: random.Random, support_max: int, den_max: int = 100) -> Seq:
    """Signed rational entries, roughly half of them zero."""
    length = rng.randint(1, support_max + 1)
    values = []
    for _ in range(length):
        if rng.random() < 0.5:
            values.append(Fraction(0))
        else:
            q = Fraction(rng.randint(1, den_max), rng.randint(1, den_max))
            values.append(q if rng.random() < 0.5 else -q)
    return Seq.from_values(values)


def random_monotone_seq(rng: random.Random, support_max: int, den_max: int = 100) -> Seq:
    """Non-increasing nonnegative values with denominators at most ``den_max``."""
    length = rng.randint(1, support_max + 1)
    values = [Fraction(rng.randint(0, 4 * den_max), rng.randint(1, den_max)) for _ in range(length)]
    values.sort(reverse=True)
    return Seq.from_values(values)


def fuzz_trial(k: int, seed: int, support_max: int, s_denom_max: int, monotone: bool = False) -> CovReport:
    rng = _trial_rng(seed, k)
    make: Callable[[random.Random, int], Seq] = random_monotone_seq if monotone else random_general_seq
    a = make(rng, support_max)
    s = random_rate(rng, s_denom_max)
    return verify_change_of_variable(a, s)


def probe_report() -> CovReport:
    return verify_change_of_variable(PROBE_SEQ, PROBE_RATE)


def fuzz_unrestricted(
    trials: int,
    seed: int,
    support_max: int = 8,
    s_denom_max: int = 12,
    monotone: bool = False,
    include_probe: bool = True,
    map_fn: Callable = map,
) -> list[CovReport]:
    """Search for violations of the change-of-variable estimate without monotonicity.

    Trial ``k`` draws from a generator seeded by ``(seed, k)`` alone, so the
    witness list is the same whatever order (or process) the trials run in.
    The built-in probe ``a = {2: 1}, s = 2/3`` is evaluated first unless
    ``include_probe`` is false. ``map_fn`` may be an executor's ``map``.
    """
    witnesses = []
    if include_probe:
        probe = probe_report()
        if not probe.holds:
            witnesses.append(probe)
    ks = range(trials)
    results = map_fn(
        fuzz_trial,
        ks,
        [seed] * trials,
        [support_max] * trials,
        [s_denom_max] * trials,
        [monotone] * trials,
    )
    witnesses.extend(r for r in results if not r.holds)
    return witnesses


# -- continuum formula on step functions -----------------------------------


def step_integral_full(a: Seq) -> Fraction:
    """``∫_0^∞ |a_[x]| dx``: one unit-width step per index."""
    total = Fraction(0)
    for m, v in a:
        total += abs(v) * ((m + 1) - m)
    if total != lp_power_sum(a, 1):
        raise AssertionError("step integral disagrees with the l1 sum")
    return total


def step_integral_scaled(a: Seq, s: RateLike) -> Fraction:
    """``s * ∫_0^∞ |a_[sx]| dx`` by breakpoints ``x = m/s``; checked against the unscaled integral."""
    r = as_rate(s).value
    inner = Fraction(0)
    for m, v in a:
        inner += abs(v) * ((m + 1) / r - m / r)
    value = r * inner
    if value != step_integral_full(a):
        raise AssertionError("scaled step integral differs from the unscaled one")
    return value


def riemann_vs_integral_check(a_monotone: Seq, s: RateLike) -> Report:
    """Right-endpoint sum ``sum_{n>=1} |a_[ns]|`` against ``∫_0^∞ |a_[sx]| dx``."""
    _check_monotone(a_monotone)
    r = as_rate(s)
    lhs = subsampled_sum_direct(a_monotone, r)
    rhs = sum((abs(v) / r.value for _, v in a_monotone), Fraction(0))
    return Report(
        check="riemann_vs_integral",
        status=HOLDS if lhs <= rhs else VIOLATED,
        lhs=lhs,
        rhs=rhs,
        details={"s": r.value},
    )

