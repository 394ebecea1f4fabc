from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import settings

from hardycov.sequences import Seq

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


def rationals(den_max=100, num_max=200, signed=True):
    lo = -num_max if signed else 0
    return st.builds(Fraction, st.integers(lo, num_max), st.integers(1, den_max))


def rates(den_max=40, s_max=4):
    return st.integers(1, den_max).flatmap(
        lambda d: st.integers(1, s_max * d).map(lambda n: Fraction(n, d))
    )


@st.composite
def seqs(draw, max_len=12, signed=True, den_max=100):
    values = draw(st.lists(rationals(den_max, signed=signed), max_size=max_len))
    return Seq.from_values(values)


@st.composite
def monotone_seqs(draw, max_len=12, den_max=100):
    values = draw(st.lists(rationals(den_max, signed=False), max_size=max_len))
    return Seq.from_values(sorted(values, reverse=True))
