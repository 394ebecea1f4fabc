import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction as F

import pytest
from hypothesis import given

from hardycov.counting import count_I
from hardycov.cov import (
    fuzz_unrestricted,
    probe_report,
    riemann_vs_integral_check,
    step_integral_full,
    step_integral_scaled,
    subsampled_sum_direct,
    subsampled_sum_via_counts,
    verify_change_of_variable,
)
from hardycov.sequences import MonotonicityViolation, Seq

from conftest import monotone_seqs, rates, seqs


def _subsample_brute(a, s):
    # Fraction floor, independent of the integer fast path
    top = a.support_max
    if top is None:
        return F(0)
    n_stop = math.ceil((top + 1) / s) + 2
    return sum((abs(a[math.floor(n * s)]) for n in range(1, n_stop)), F(0))


@pytest.mark.parametrize(
    "a, s, expected",
    [(Seq({0: 1}), F(1, 2), 1), (Seq({1: 1}), F(1, 2), 2), (Seq(), F(5, 7), 0), (Seq({2: 1}), F(2, 3), 2)],
)
def test_subsampled_examples(a, s, expected):
    assert _subsample_brute(a, s) == expected
    assert subsampled_sum_direct(a, s) == expected
    assert subsampled_sum_via_counts(a, s) == expected


def test_via_counts_uses_preimage_sizes():
    assert subsampled_sum_via_counts(Seq({1: 1}), F(1, 2)) == count_I(1, F(1, 2)) == 2
    assert subsampled_sum_via_counts(Seq({2: 1}), F(2, 3)) == count_I(2, F(2, 3)) == 2


@given(seqs(max_len=20), rates())
def test_dual_paths_agree(a, s):
    direct = subsampled_sum_direct(a, s)
    assert direct == subsampled_sum_via_counts(a, s) == _subsample_brute(a, s)


def test_verify_examples():
    r = verify_change_of_variable(Seq({0: 1}), 1)
    assert (r.lhs, r.rhs, r.holds, r.slack) == (0, 1, True, 1)
    # Dirichlet condition a_0 = 0 at s = 1: equality
    r = verify_change_of_variable(Seq({1: 1}), 1)
    assert r.lhs == r.rhs == 1 and r.slack == 0
    # integer s on a non-increasing sequence
    r = verify_change_of_variable(Seq({0: 1, 1: 1}), 2, require_monotone=True)
    assert r.lhs == 0 and r.rhs == 2 and r.holds


def test_verify_rejects_non_monotone_when_required():
    with pytest.raises(MonotonicityViolation):
        verify_change_of_variable(Seq({1: 1}), 1, require_monotone=True)


def test_report_invariants():
    r = verify_change_of_variable(Seq({0: 3, 4: -2}), F(3, 5))
    assert r.slack == r.rhs - r.lhs
    assert r.holds == (r.lhs <= r.rhs)
    assert r.n_terms == sum(1 for n in range(1, 20) if Seq({0: 3, 4: -2})[math.floor(n * F(3, 5))])


@given(monotone_seqs(max_len=16), rates())
def test_monotone_theorem(a, s):
    assert verify_change_of_variable(a, s, require_monotone=True).holds


def test_monotone_theorem_exhaustive_small_lattice():
    values = [F(0), F(1, 2), F(1), F(2)]
    rates_ = sorted({F(n, d) for d in range(1, 7) for n in range(1, 4 * d + 1)})
    for length in range(1, 5):
        for combo in itertools.combinations_with_replacement(values, length):
            a = Seq.from_values(sorted(combo, reverse=True))
            for s in rates_:
                assert verify_change_of_variable(a, s, require_monotone=True).holds, (a, s)


@given(seqs(max_len=12))
def test_equality_at_s_one_with_dirichlet(a):
    a = Seq((i + 1, v) for i, v in a)  # shift so a_0 = 0
    assert verify_change_of_variable(a, 1).slack == 0


def test_probe_violates():
    r = probe_report()
    assert r.lhs == F(4, 3) and r.rhs == 1 and not r.holds
    assert r.s == F(2, 3) and r.seq == Seq({2: 1})


def test_fuzz_probe_only():
    witnesses = fuzz_unrestricted(0, seed=1)
    assert len(witnesses) == 1 and witnesses[0] == probe_report()


def test_fuzz_monotone_finds_nothing():
    assert fuzz_unrestricted(300, seed=3, monotone=True, include_probe=False) == []


def test_fuzz_is_deterministic_and_order_independent():
    first = fuzz_unrestricted(200, seed=11)
    again = fuzz_unrestricted(200, seed=11)
    assert [w.to_json() for w in first] == [w.to_json() for w in again]
    with ProcessPoolExecutor(max_workers=2) as pool:
        parallel = fuzz_unrestricted(200, seed=11, map_fn=pool.map)
    assert [w.to_json() for w in parallel] == [w.to_json() for w in first]
    assert all(not w.holds for w in first)


@pytest.mark.parametrize(
    "a, expected",
    [(Seq({0: 1}), 1), (Seq({0: 1, 3: 2}), 3), (Seq(), 0)],
)
def test_step_integral_full(a, expected):
    assert step_integral_full(a) == expected


def test_step_integral_scaled_examples():
    a = Seq({0: 1, 3: -2})
    assert step_integral_scaled(a, 1) == step_integral_full(a)
    assert step_integral_scaled(Seq({0: 1}), F(1, 2)) == 1


def _scaled_by_breakpoints(a, s):
    # integrate x -> |a_[sx]| over [0, (top+1)/s] piece by piece
    top = a.support_max
    if top is None:
        return F(0)
    cuts = [F(m) / s for m in range(top + 2)]
    return s * sum((abs(a[m]) * (cuts[m + 1] - cuts[m]) for m in range(top + 1)), F(0))


@given(seqs(max_len=20), rates())
def test_change_of_variable_formula(a, s):
    assert step_integral_scaled(a, s) == _scaled_by_breakpoints(a, s) == step_integral_full(a)


@pytest.mark.parametrize(
    "a, s, lhs, rhs",
    [(Seq({0: 1}), F(1, 2), 1, 2), (Seq({0: 1}), F(2, 3), 1, F(3, 2)), (Seq(), F(1, 3), 0, 0)],
)
def test_riemann_vs_integral_examples(a, s, lhs, rhs):
    r = riemann_vs_integral_check(a, s)
    assert r.ok and (r.lhs, r.rhs) == (lhs, rhs)


@given(monotone_seqs(), rates())
def test_riemann_vs_integral_property(a, s):
    assert riemann_vs_integral_check(a, s).ok


def test_riemann_vs_integral_rejects_non_monotone():
    with pytest.raises(MonotonicityViolation):
        riemann_vs_integral_check(Seq({2: 1}), F(2, 3))


def test_cov_report_serialization():
    r = probe_report()
    rec = r.to_record()
    assert rec["lhs"] == "4/3" and rec["rhs"] == "1/1" and rec["holds"] is False
    assert rec["seq"] == {"2": "1/1"}
    assert "slack=-1/3" in r.to_text().splitlines()
