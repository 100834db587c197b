"""Seeded random automata for property tests and benchmarks."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .core import Automaton


def random_weight(rng: random.Random, max_abs: int = 3, max_den: int = 3) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-max_abs * den, max_abs * den), den)


def random_automaton(
    rng: random.Random,
    lam,
    n_states: int = 3,
    n_letters: int = 2,
    max_succ: int = 2,
    max_abs: int = 3,
    max_den: int = 3,
    deterministic: bool = False,
    weights: Sequence[Fraction] | None = None,
) -> Automaton:
    """A complete automaton with 1..max_succ successors per (state, letter)."""
    states = [f"q{i}" for i in range(n_states)]
    alphabet = [chr(ord("a") + i) for i in range(n_letters)]
    ts = []
    for q in states:
        for s in alphabet:
            fan = 1 if deterministic else rng.randint(1, min(max_succ, n_states))
            for dst in rng.sample(states, fan):
                w = rng.choice(weights) if weights else random_weight(rng, max_abs, max_den)
                ts.append((q, s, dst, w))
    return Automaton.build(alphabet, states, states[0], ts, lam)
