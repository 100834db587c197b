"""Discounted-sum automata: data model, exact values, costs and gaps.

All weights and values are :class:`fractions.Fraction`.  The only non-rational
value that ever appears is :data:`INF`, an absorbing sentinel used for
unreachable states and clamped gaps.  It is never stored as a weight.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence, Union

# Absorbs under + and min; compares above every Fraction.
INF = math.inf

Weight = Union[Fraction, int, str]
Gap = Union[Fraction, float]  # float only ever means INF
Word = Sequence[str]

ORACLE_LIMIT = 10**7


class DSAError(ValueError):
    """Base class for errors raised by this package."""


class UnknownSymbolError(DSAError):
    pass


class UnknownStateError(DSAError):
    pass


class InvalidRunError(DSAError):
    pass


class OracleLimitError(DSAError):
    pass


class IncompleteAutomatonError(DSAError):
    pass


class NondeterministicError(DSAError):
    pass


def as_fraction(x: Weight) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floats are not accepted as weights; use a Fraction or a string")
    return Fraction(x)


@dataclass(frozen=True)
class DiscountFactor:
    value: Fraction

    def __post_init__(self):
        v = as_fraction(self.value)
        if v <= 1:
            raise DSAError(f"discount factor must be > 1, got {v}")
        object.__setattr__(self, "value", v)

    @property
    def h(self) -> int:
        return self.value.numerator

    @property
    def k(self) -> int:
        return self.value.denominator

    @property
    def is_integral(self) -> bool:
        return self.value.denominator == 1

    @property
    def tail_sum(self) -> Fraction:
        """Sum of 1/lambda^i over i >= 0, i.e. lambda / (lambda - 1)."""
        return self.value / (self.value - 1)

    def __str__(self):
        return str(self.value)


class Transition(tuple):
    """A ``(src, symbol, dst, weight)`` quadruple over state/symbol indices."""

    __slots__ = ()

    def __new__(cls, src: int, symbol: int, dst: int, weight: Weight):
        return tuple.__new__(cls, (src, symbol, dst, as_fraction(weight)))

    src = property(lambda self: self[0])
    symbol = property(lambda self: self[1])
    dst = property(lambda self: self[2])
    weight = property(lambda self: self[3])


@dataclass(frozen=True)
class Automaton:
    """An immutable discounted-sum automaton.

    States and symbols are referred to by index internally; ``states`` and
    ``alphabet`` hold their names.  Use :meth:`build` to construct from names.
    """

    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    initial: int
    transitions: tuple[Transition, ...]
    lam: DiscountFactor

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "states", tuple(self.states))
        if not isinstance(self.lam, DiscountFactor):
            object.__setattr__(self, "lam", DiscountFactor(self.lam))
        object.__setattr__(
            self, "transitions", tuple(t if isinstance(t, Transition) else Transition(*t) for t in self.transitions)
        )
        if len(set(self.alphabet)) != len(self.alphabet):
            raise DSAError("duplicate symbol in alphabet")
        if len(set(self.states)) != len(self.states):
            raise DSAError("duplicate state name")
        if not self.states:
            raise DSAError("automaton needs at least one state")
        if not 0 <= self.initial < len(self.states):
            raise UnknownStateError(f"initial state index {self.initial} out of range")
        seen = set()
        n, s = len(self.states), len(self.alphabet)
        for t in self.transitions:
            if not (0 <= t.src < n and 0 <= t.dst < n):
                raise UnknownStateError(f"transition {t} refers to an unknown state")
            if not 0 <= t.symbol < s:
                raise UnknownSymbolError(f"transition {t} refers to an unknown symbol")
            key = (t.src, t.symbol, t.dst)
            if key in seen:
                raise DSAError(
                    f"duplicate transition {self.states[t.src]} -{self.alphabet[t.symbol]}-> {self.states[t.dst]}"
                )
            seen.add(key)

    @classmethod
    def build(
        cls,
        alphabet: Iterable[str],
        states: Iterable[str],
        initial: str,
        transitions: Iterable[tuple[str, str, str, Weight]],
        lam: Union[DiscountFactor, Weight],
    ) -> "Automaton":
        alphabet, states = tuple(alphabet), tuple(states)
        sidx = {q: i for i, q in enumerate(states)}
        aidx = {a: i for i, a in enumerate(alphabet)}
        ts = []
        for p, a, q, w in transitions:
            if p not in sidx or q not in sidx:
                raise UnknownStateError(f"unknown state in transition ({p}, {a}, {q})")
            if a not in aidx:
                raise UnknownSymbolError(f"unknown symbol {a!r}")
            ts.append(Transition(sidx[p], aidx[a], sidx[q], w))
        if initial not in sidx:
            raise UnknownStateError(f"unknown initial state {initial!r}")
        if not isinstance(lam, DiscountFactor):
            lam = DiscountFactor(as_fraction(lam))
        return cls(alphabet, states, sidx[initial], tuple(ts), lam)

    # derived structure

    @cached_property
    def delta(self) -> dict[tuple[int, int], tuple[tuple[int, Fraction], ...]]:
        out: dict[tuple[int, int], list] = {}
        for t in self.transitions:
            out.setdefault((t.src, t.symbol), []).append((t.dst, t.weight))
        return {k: tuple(v) for k, v in out.items()}

    def successors(self, q: int, a: int) -> tuple[tuple[int, Fraction], ...]:
        return self.delta.get((q, a), ())

    @cached_property
    def complete(self) -> bool:
        return all((q, a) in self.delta for q in range(len(self.states)) for a in range(len(self.alphabet)))

    @cached_property
    def deterministic(self) -> bool:
        return all(len(v) <= 1 for v in self.delta.values())

    @cached_property
    def weights(self) -> frozenset[Fraction]:
        return frozenset(t.weight for t in self.transitions)

    @cached_property
    def min_weight(self) -> Fraction:
        return min(self.weights) if self.weights else Fraction(0)

    @cached_property
    def max_weight(self) -> Fraction:
        return max(self.weights) if self.weights else Fraction(0)

    @property
    def max_weight_difference(self) -> Fraction:
        """T: the largest difference between two weights."""
        return self.max_weight - self.min_weight

    @cached_property
    def common_denominator(self) -> int:
        d = 1
        for w in self.weights:
            d = math.lcm(d, w.denominator)
        return d

    @property
    def scaled_weight_difference(self) -> int:
        """m = T * d, always an integer."""
        m = self.max_weight_difference * self.common_denominator
        assert m.denominator == 1
        return m.numerator

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def symbol_index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    def state_id(self, q: Union[str, int]) -> int:
        if isinstance(q, int):
            if not 0 <= q < len(self.states):
                raise UnknownStateError(f"state index {q} out of range")
            return q
        try:
            return self.state_index[q]
        except KeyError:
            raise UnknownStateError(f"unknown state {q!r}") from None

    def encode(self, word: Word) -> tuple[int, ...]:
        try:
            return tuple(self.symbol_index[a] for a in word)
        except KeyError as e:
            raise UnknownSymbolError(f"symbol {e.args[0]!r} not in alphabet") from None

    def with_initial(self, q: Union[str, int]) -> "Automaton":
        """The same automaton started from ``q``."""
        return Automaton(self.alphabet, self.states, self.state_id(q), self.transitions, self.lam)

    def map_weights(self, f) -> "Automaton":
        ts = tuple(Transition(t.src, t.symbol, t.dst, f(t.weight)) for t in self.transitions)
        return Automaton(self.alphabet, self.states, self.initial, ts, self.lam)

    def __repr__(self):
        return (
            f"Automaton(|Q|={len(self.states)}, |Σ|={len(self.alphabet)}, "
            f"|δ|={len(self.transitions)}, λ={self.lam})"
        )


@dataclass(frozen=True)
class ValidationReport:
    complete: bool
    deterministic: bool
    lambda_ok: bool
    issues: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues


def validate(a: Automaton) -> ValidationReport:
    issues = []
    for q in range(len(a.states)):
        for s in range(len(a.alphabet)):
            if (q, s) not in a.delta:
                issues.append(f"incomplete: state {a.states[q]} has no transition on {a.alphabet[s]}")
    lambda_ok = a.lam.value > 1
    if not lambda_ok:
        issues.append(f"discount factor {a.lam} is not > 1")
    return ValidationReport(a.complete, a.deterministic, lambda_ok, issues)


@dataclass(frozen=True)
class Run:
    """States q_0..q_n and symbols s_1..s_n; q_0 must be the initial state."""

    states: tuple[str, ...]
    symbols: tuple[str, ...]

    def __post_init__(self):
        if len(self.states) != len(self.symbols) + 1:
            raise InvalidRunError("a run has exactly one more state than symbols")

    def __len__(self):
        return len(self.symbols)


def run_value(a: Automaton, r: Run) -> Fraction:
    lam = a.lam.value
    try:
        qs = [a.state_id(q) for q in r.states]
        ss = a.encode(r.symbols)
    except DSAError:
        raise InvalidRunError("not a run of this automaton") from None
    if qs[0] != a.initial:
        raise InvalidRunError("not a run of this automaton: does not start in the initial state")
    total, scale = Fraction(0), Fraction(1)
    for i, s in enumerate(ss):
        w = dict(a.successors(qs[i], s)).get(qs[i + 1])
        if w is None:
            raise InvalidRunError("not a run of this automaton")
        total += w * scale
        scale /= lam
    return total


def _step_costs(a: Automaton, costs: list, symbol: int, scale: Fraction) -> list:
    nxt = [INF] * len(a.states)
    for q, c in enumerate(costs):
        if c == INF:
            continue
        for dst, w in a.successors(q, symbol):
            v = c + w * scale
            if v < nxt[dst]:
                nxt[dst] = v
    return nxt


def cost_vector(a: Automaton, w: Word) -> list[Gap]:
    """cost(q, w) for every state q, INF where q is unreachable over w."""
    word = a.encode(w)
    costs: list = [INF] * len(a.states)
    costs[a.initial] = Fraction(0)
    scale = Fraction(1)
    for s in word:
        costs = _step_costs(a, costs, s, scale)
        scale /= a.lam.value
    return costs


def word_value(a: Automaton, w: Word) -> Gap:
    """A(w) over finite words.  INF only for an incomplete automaton with no run on w."""
    return min(cost_vector(a, w))


def gap(a: Automaton, q: Union[str, int], w: Word) -> Gap:
    qi = a.state_id(q)
    costs = cost_vector(a, w)
    c = costs[qi]
    if c == INF:
        return INF
    return a.lam.value ** len(w) * (c - min(costs))


def gap_vector(a: Automaton, w: Word) -> list[Gap]:
    costs = cost_vector(a, w)
    best = min(costs)
    scale = a.lam.value ** len(w)
    return [INF if c == INF else scale * (c - best) for c in costs]


def iter_words(alphabet: Sequence[str], max_len: int, min_len: int = 0) -> Iterator[tuple[str, ...]]:
    for n in range(min_len, max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def all_word_values(a: Automaton, max_len: int) -> dict[tuple[str, ...], Gap]:
    """word_value for every word up to ``max_len``, sharing cost vectors along prefixes."""
    out = {}
    init: list = [INF] * len(a.states)
    init[a.initial] = Fraction(0)
    stack = [((), init, Fraction(1))]
    while stack:
        w, costs, scale = stack.pop()
        out[w] = min(costs)
        if len(w) < max_len:
            nscale = scale / a.lam.value
            for s, name in enumerate(a.alphabet):
                stack.append((w + (name,), _step_costs(a, costs, s, scale), nscale))
    return out


# Independent oracle.  Nothing below shares traversal code with cost_vector.


def brute_force_value(a: Automaton, w: Word, limit: int = ORACLE_LIMIT) -> Gap:
    """min over explicitly enumerated state sequences of the run value."""
    word = a.encode(w)
    n = len(a.states)
    if n ** len(word) > limit:
        raise OracleLimitError(f"oracle limit: {n}^{len(word)} candidate runs exceeds {limit}")
    lam = a.lam.value
    weight = {(t.src, t.symbol, t.dst): t.weight for t in a.transitions}
    best = INF
    for tail in itertools.product(range(n), repeat=len(word)):
        path = (a.initial,) + tail
        total, ok = Fraction(0), True
        for i, s in enumerate(word):
            wt = weight.get((path[i], s, path[i + 1]))
            if wt is None:
                ok = False
                break
            total += wt / lam**i
        if ok and total < best:
            best = total
    return best


def brute_force_table(a: Automaton, max_len: int, limit: int = ORACLE_LIMIT) -> dict[tuple[str, ...], Gap]:
    """Oracle values for every word up to ``max_len`` by walking the tree of all runs.

    Every run of every word is visited individually; no per-state minimisation
    happens before the final per-word ``min``.
    """
    lam = a.lam.value
    out: dict[tuple[str, ...], Gap] = {w: INF for w in iter_words(a.alphabet, max_len)}
    out[()] = Fraction(0)
    edges: dict[int, list] = {}
    for t in a.transitions:
        edges.setdefault(t.src, []).append(t)
    visited = 0
    stack = [(a.initial, (), Fraction(0), Fraction(1))]
    while stack:
        q, w, val, scale = stack.pop()
        visited += 1
        if visited > limit:
            raise OracleLimitError(f"oracle limit: more than {limit} runs")
        if val < out[w]:
            out[w] = val
        if len(w) == max_len:
            continue
        for t in edges.get(q, ()):
            stack.append((t.dst, w + (a.alphabet[t.symbol],), val + t.weight * scale, scale / lam))
    return out


@dataclass(frozen=True)
class ValueReport:
    exact: Fraction
    tail_low: Fraction
    tail_high: Fraction

    @property
    def width(self) -> Fraction:
        return self.tail_high - self.tail_low


def tail_bounds(a: Automaton, w: Word) -> ValueReport:
    """Bracket A(wz) for every infinite continuation z."""
    if not a.complete:
        raise IncompleteAutomatonError("tail bounds require a complete automaton")
    exact = word_value(a, w)
    lam = a.lam.value
    tail = a.lam.tail_sum / lam ** len(w)
    return ValueReport(exact, exact + a.min_weight * tail, exact + a.max_weight * tail)


def half_life_bounds(K: int) -> tuple[bool, bool]:
    """Check ``2 < (1+1/K)^K < 3`` and ``1 < K*log2(1+1/K) < 3/2`` exactly.

    The logarithmic statement is decided through its exponentiated form
    ``2^2 < (1+1/K)^(2K) < 2^3``, so no logarithm is ever evaluated.
    """
    if K < 2:
        raise DSAError("K must be at least 2")
    base = Fraction(K + 1, K)
    p = base**K
    power_ok = 2 < p < 3
    sq = p * p
    log_ok = 4 < sq < 8
    return power_ok, log_ok


def constant_automaton(alphabet: Sequence[str], weight: Weight, lam: Weight, name: str = "q") -> Automaton:
    """Single state with a self-loop of the given weight on every letter."""
    return Automaton.build(alphabet, [name], name, [(name, s, name, weight) for s in alphabet], lam)


def zero_automaton(alphabet: Sequence[str], lam: Weight) -> Automaton:
    return constant_automaton(alphabet, 0, lam)
