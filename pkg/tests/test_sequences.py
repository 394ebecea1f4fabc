import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hardycov.exact import Enclosure, nth_root_enclosure
from hardycov.sequences import (
    MonotonicityViolation,
    PNorm,
    Seq,
    SeqFormatError,
    abel_step1_check,
    abel_step2_check,
    cesaro,
    cesaro_tail_bound,
    format_seq,
    lp_norm,
    lp_power_sum,
    parse_seq,
    partial_sum_domination_check,
    rearrange_nonincreasing,
)
from hardycov.counting import count_J

from conftest import monotone_seqs, rates, rationals, seqs


def test_seq_normalizes_zeros_and_order():
    a = Seq({3: 0, 1: F(1, 2), 0: 1})
    assert a.entries == ((0, F(1)), (1, F(1, 2)))
    assert a.support_max == 1
    assert a[7] == 0
    assert Seq().support_max is None
    assert Seq({0: 0}) == Seq()


def test_seq_rejects_bad_indices():
    with pytest.raises(ValueError):
        Seq({-1: 1})
    with pytest.raises(ValueError):
        Seq([(0, 1), (0, 2)])


def test_monotone_predicate():
    assert Seq.from_values([3, 2, 2, 1]).is_nonincreasing_nonneg()
    assert Seq().is_nonincreasing_nonneg()
    assert not Seq({1: 1}).is_nonincreasing_nonneg()  # a_0 = 0 < a_1
    assert not Seq.from_values([1, -1]).is_nonincreasing_nonneg()
    assert not Seq.from_values([1, 2]).is_nonincreasing_nonneg()


def test_file_round_trip():
    text = "# comment\n0 1/2\n\n3 -4\n7 5/10\n"
    a = parse_seq(text)
    assert a == Seq({0: F(1, 2), 3: -4, 7: F(1, 2)})
    assert parse_seq(format_seq(a)) == a


@pytest.mark.parametrize(
    "text, line",
    [("0 1\n0 2\n", 2), ("0 1/0\n", 1), ("x 1\n", 1), ("0 1 2\n", 1), ("# c\n1 1\n-1 2\n", 3)],
)
def test_file_errors_name_line(text, line):
    with pytest.raises(SeqFormatError) as info:
        parse_seq(text)
    assert info.value.line == line


def test_pnorm():
    assert PNorm(2).conjugate == 2
    assert PNorm(F(4, 3)).conjugate == 4
    assert PNorm(1).conjugate is None
    with pytest.raises(ValueError):
        PNorm(F(1, 2))


@given(rationals(den_max=50).filter(lambda p: p > 1))
def test_conjugate_relation(p):
    p = abs(p) + 1
    q = PNorm(p).conjugate
    assert 1 / p + 1 / q == 1


@pytest.mark.parametrize(
    "a, p, expected",
    [(Seq({0: 1}), 2, 1), (Seq({0: F(1, 2), 1: F(1, 2)}), 2, F(1, 2)), (Seq({0: 3, 1: -4}), 2, 25)],
)
def test_lp_power_sum(a, p, expected):
    assert lp_power_sum(a, p) == expected


def test_lp_norm_examples():
    for p in (1, 2, 3, F(5, 2)):
        assert lp_norm(Seq({0: 1}), p) == Enclosure(1, 1)
    assert lp_norm(Seq({0: 3, 1: 4}), 2).lower == 5 and lp_norm(Seq({0: 3, 1: 4}), 2).upper == 5
    enc = lp_norm(Seq({0: 1, 1: 1}), 3, F(1, 10**6))
    oracle = nth_root_enclosure(2, 3, F(1, 10**8))
    assert enc.lower <= oracle.upper and oracle.lower <= enc.upper
    assert abs(float(enc.midpoint) - 2 ** (1 / 3)) < 1e-6


def test_lp_norm_fractional_p_encloses_float_value():
    a = Seq({0: 1, 1: F(1, 2), 4: -3})
    p = F(3, 2)
    enc = lp_norm(a, p, F(1, 10**8))
    assert enc.width <= F(1, 10**8)
    approx = sum(abs(float(v)) ** 1.5 for _, v in a) ** (1 / 1.5)
    assert float(enc.lower) - 1e-12 <= approx <= float(enc.upper) + 1e-12


@given(seqs(), st.integers(1, 4))
def test_lp_norm_power_brackets_sum(a, p):
    enc = lp_norm(a, p, F(1, 2**20))
    s = lp_power_sum(a, p)
    assert enc.lower**p <= s <= enc.upper**p


def test_cesaro_examples():
    assert cesaro(Seq({0: 1, 1: 1, 2: 1}), 2) == Seq({0: 1, 1: 1, 2: 1})
    assert cesaro(Seq({0: 1}), 3) == Seq({0: 1, 1: F(1, 2), 2: F(1, 3), 3: F(1, 4)})


def _cesaro_direct(a, n_max):
    return Seq({n: sum((a[k] for k in range(n + 1)), F(0)) / (n + 1) for n in range(n_max + 1)})


def test_cesaro_worked_example():
    a = Seq({1: 1, 2: 2, 3: 3})
    expected = _cesaro_direct(a, 3)
    assert expected == Seq({0: 0, 1: F(1, 2), 2: 1, 3: F(3, 2)})
    assert cesaro(a, 3) == expected


@given(seqs(), st.integers(0, 20))
def test_cesaro_matches_direct_sum(a, n_max):
    assert cesaro(a, n_max) == _cesaro_direct(a, n_max)


@given(seqs(), seqs(), rationals(), rationals(), st.integers(0, 15))
def test_cesaro_linear(a, b, alpha, beta, n_max):
    left = cesaro(a.scale(alpha) + b.scale(beta), n_max)
    right = cesaro(a, n_max).scale(alpha) + cesaro(b, n_max).scale(beta)
    assert left == right


@given(rationals().filter(bool), st.integers(0, 30))
def test_cesaro_constant_fixed_point(c, n_max):
    a = Seq.from_values([c] * (n_max + 1))
    assert cesaro(a, n_max) == a


def test_cesaro_tail_bound_examples():
    assert cesaro_tail_bound(0, 5, 3) == 0
    assert cesaro_tail_bound(1, 1, 2) == 1
    assert cesaro_tail_bound(2, 10, 2) == F(2, 5)


def test_cesaro_tail_bound_dominates_partial_sums():
    # sum_{n>=1} 1/(n+1)^2 = pi^2/6 - 1; check the 10^6-term partial sum and the closed form
    partial = math.fsum(1.0 / (n + 1) ** 2 for n in range(1, 10**6))
    assert partial < math.pi**2 / 6 - 1 <= float(cesaro_tail_bound(1, 1, 2))


@given(rationals(signed=False), st.integers(1, 50), st.integers(2, 5))
def test_cesaro_tail_bound_dominates(total, M, p):
    bound = cesaro_tail_bound(total, M, p)
    head = sum((total / (n + 1)) ** p for n in range(M, M + 200))
    assert head <= bound


def test_rearrange_examples():
    assert rearrange_nonincreasing(Seq({0: -3, 2: 1, 5: 2})) == Seq({0: 3, 1: 2, 2: 1})
    mono = Seq.from_values([5, 3, 3, 1])
    assert rearrange_nonincreasing(mono) == mono
    assert rearrange_nonincreasing(Seq({1: 1})) == Seq({0: 1})


@given(seqs(), st.integers(1, 5))
def test_rearrange_preserves_power_sums(a, p):
    assert lp_power_sum(rearrange_nonincreasing(a), p) == lp_power_sum(a, p)


def test_partial_sum_domination_examples():
    r = partial_sum_domination_check(Seq.from_values([3, 2, 1]), 5)
    assert r.ok and r.details["equal_prefixes"] == 6
    r = partial_sum_domination_check(Seq({2: 1}), 3)
    assert r.ok and r.details["first_failure"] is None


@pytest.mark.parametrize("multiset", [(1, 2, 3), (0, 1, 1, 2), (F(1, 2), 3, F(7, 3), 0, 1)])
def test_partial_sum_domination_all_permutations(multiset):
    for perm in itertools.permutations(multiset):
        assert partial_sum_domination_check(Seq.from_values(perm), len(perm) + 1).ok


@given(seqs(max_len=20), st.integers(0, 25))
def test_partial_sum_domination_property(a, n_max):
    assert partial_sum_domination_check(a, n_max).ok


def _abel1_direct(a, s):
    # enumerate J_m(s) by brute force and sum both sides term by term
    def J(m):
        return sum(1 for n in range(1, 10**4) if n < m / s)

    top = a.length + 1
    lhs = sum((a[m] * (J(m + 1) - J(m)) for m in range(top)), F(0))
    rhs = sum((J(m + 1) * (a[m] - a[m + 1]) for m in range(top)), F(0))
    return lhs, rhs


def test_abel_step1_examples():
    # #J_1(1/2) = #([0, 2) ∩ N) = #{1} = 1, by enumeration
    assert _abel1_direct(Seq({0: 1}), F(1, 2)) == (1, 1)
    r = abel_step1_check(Seq({0: 1}), F(1, 2))
    assert r.ok and r.lhs == r.rhs == 1 == count_J(1, F(1, 2))
    r = abel_step1_check(Seq(), F(3, 7))
    assert r.ok and r.lhs == 0
    a = Seq({0: 1, 1: 1})
    r = abel_step1_check(a, 1)
    assert r.ok and (r.lhs, r.rhs) == _abel1_direct(a, F(1))


@given(monotone_seqs(), rates())
def test_abel_step1_property(a, s):
    assert abel_step1_check(a, s).ok


def test_abel_step2_examples():
    r = abel_step2_check(Seq({0: 1}))
    assert r.ok and r.lhs == 1
    r = abel_step2_check(Seq({0: 2, 1: 1}))
    assert r.ok and r.lhs == r.rhs == 3


@given(monotone_seqs(max_len=64))
def test_abel_step2_property(a):
    r = abel_step2_check(a)
    direct = sum((v for _, v in a), F(0))
    assert r.ok and r.rhs == direct


def test_abel_checks_reject_non_monotone():
    with pytest.raises(MonotonicityViolation):
        abel_step1_check(Seq({1: 1}), 1)
    with pytest.raises(MonotonicityViolation):
        abel_step2_check(Seq.from_values([1, -1]))
