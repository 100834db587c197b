import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from dsautomata.core import Automaton
from dsautomata.randomgen import random_automaton

F = Fraction


@pytest.fixture
def rng():
    return random.Random(20240601)


@st.composite
def automata(draw, lams=(2, 3), max_states=3, max_letters=2, deterministic=None, max_den=3):
    """Complete automata with small rational weights."""
    lam = draw(st.sampled_from(lams))
    det = draw(st.booleans()) if deterministic is None else deterministic
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(1, max_states))
    k = draw(st.integers(1, max_letters))
    return random_automaton(random.Random(seed), lam, n, k, deterministic=det, max_den=max_den)


def words(alphabet, max_len):
    return st.lists(st.sampled_from(list(alphabet)), max_size=max_len).map(tuple)


def table_equal(a, b, oracle):
    return all(a[w] == oracle[w] for w in oracle) and all(b[w] == oracle[w] for w in oracle)


def single_state(weights_by_letter, lam):
    """One state looping on every letter with the given weights."""
    return Automaton.build(
        list(weights_by_letter), ["q"], "q", [("q", s, "q", w) for s, w in weights_by_letter.items()], lam
    )
