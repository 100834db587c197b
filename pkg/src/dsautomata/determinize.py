"""Exact determinization by tracking one recoverable gap per original state."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from .core import INF, Automaton, DSAError, Gap, IncompleteAutomatonError, Transition

DEFAULT_CAP = 10**6
# m^n above this many bits is reported as "overflow".
BOUND_BITS = 256


class CapExceeded(DSAError):
    def __init__(self, states_created: int, cap: int):
        super().__init__(f"state cap exceeded: {states_created} states created, cap {cap}")
        self.states_created = states_created
        self.cap = cap


class GapVector(tuple):
    """One gap per original state, in the original state order.  INF marks a dropped state."""

    __slots__ = ()

    @classmethod
    def initial(cls, n: int, q0: int) -> "GapVector":
        return cls(Fraction(0) if i == q0 else INF for i in range(n))

    def finite(self) -> list[Fraction]:
        return [g for g in self if g != INF]

    def __str__(self):
        return "<" + ", ".join("inf" if g == INF else str(g) for g in self) + ">"

    def __repr__(self):
        return f"GapVector{self}"


@dataclass(frozen=True)
class DeterminizationResult:
    automaton: Automaton
    state_map: dict[str, GapVector]
    stats: dict = field(default_factory=dict)

    @property
    def states_created(self) -> int:
        return self.stats["states_created"]


def gap_threshold(a: Automaton) -> Fraction:
    """Gaps at or above this value can never be recovered on a finite continuation.

    A continuation of length n changes the relative cost of two runs by less
    than T * lambda/(lambda-1); that is at most 2T whenever lambda >= 2.
    For 1 < lambda < 2 the larger value is needed to stay exact.
    """
    T = a.max_weight_difference
    return T * max(Fraction(2), a.lam.tail_sum)


def _require_complete(a: Automaton, what: str):
    if not a.complete:
        raise IncompleteAutomatonError(f"{what} requires a complete automaton")


def successor_costs(a: Automaton, gv: tuple, symbol: int) -> tuple[list, Fraction]:
    """c_h = min_j (g_j + weight(q_j, symbol, q_h)) for every h, and their minimum c."""
    ch: list = [INF] * len(a.states)
    for j, g in enumerate(gv):
        if g == INF:
            continue
        for dst, w in a.successors(j, symbol):
            v = g + w
            if v < ch[dst]:
                ch[dst] = v
    c = min(ch)
    if c == INF:
        raise IncompleteAutomatonError("no successor: the automaton is incomplete")
    return ch, c


def _clamp(x: Fraction, threshold: Fraction) -> Gap:
    # x == 0 is kept even when the threshold degenerates to 0
    return INF if x > 0 and x >= threshold else x


def gap_successor(a: Automaton, gv: tuple, sigma: Union[str, int]) -> tuple[GapVector, Fraction]:
    symbol = sigma if isinstance(sigma, int) else a.encode([sigma])[0]
    if len(gv) != len(a.states):
        raise DSAError(f"gap vector has {len(gv)} entries, automaton has {len(a.states)} states")
    lam = a.lam.value
    threshold = gap_threshold(a)
    ch, c = successor_costs(a, gv, symbol)
    out = GapVector(INF if x == INF else _clamp(lam * (x - c), threshold) for x in ch)
    return out, c


Step = Callable[[GapVector, int], tuple[GapVector, Fraction]]


def explore(a: Automaton, start: GapVector, step: Step, cap: int, prefix: str = "d") -> DeterminizationResult:
    """Breadth-first exploration of gap vectors, letters in alphabet order."""
    index = {start: 0}
    order = [start]
    transitions = []
    queue = deque([start])
    iterations = 0
    while queue:
        gv = queue.popleft()
        src = index[gv]
        for s in range(len(a.alphabet)):
            iterations += 1
            nxt, w = step(gv, s)
            dst = index.get(nxt)
            if dst is None:
                if len(order) >= cap:
                    raise CapExceeded(len(order) + 1, cap)
                dst = index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            transitions.append(Transition(src, s, dst, w))
    names = tuple(f"{prefix}{i}" for i in range(len(order)))
    d = Automaton(a.alphabet, names, 0, tuple(transitions), a.lam)
    stats = {"states_created": len(order), "iterations": iterations}
    return DeterminizationResult(d, dict(zip(names, order)), stats)


def determinize_exact(a: Automaton, cap: int = DEFAULT_CAP) -> DeterminizationResult:
    _require_complete(a, "determinization")
    lam = a.lam.value
    threshold = gap_threshold(a)

    def step(gv, s):
        ch, c = successor_costs(a, gv, s)
        return GapVector(INF if x == INF else _clamp(lam * (x - c), threshold) for x in ch), c

    res = explore(a, GapVector.initial(len(a.states), a.initial), step, cap)
    res.stats["bound_m_to_n"] = theoretical_state_bound(a) if a.lam.is_integral else None
    return res


def theoretical_state_bound(a: Automaton) -> Union[int, str]:
    """m^n with m = T*d; 1 when all weights coincide."""
    if not a.lam.is_integral:
        raise DSAError("bound applies to integral factors only")
    m, n = a.scaled_weight_difference, len(a.states)
    if m == 0:
        return 1
    if (m.bit_length() - 1) * n > BOUND_BITS:
        return "overflow"
    return m**n


def gap_vector_count_bound(a: Automaton) -> Union[int, str]:
    """(|G| + 1)^n - 1, with G the finite gap values the construction can store.

    For integral lambda every finite gap is a multiple of lambda/d below the
    clamp threshold; the extra value is INF and the all-INF vector never occurs.
    """
    if not a.lam.is_integral:
        raise DSAError("bound applies to integral factors only")
    step = Fraction(a.lam.h, a.common_denominator)
    values = 1  # zero
    if a.max_weight_difference > 0:
        t = gap_threshold(a)
        values = -(-t // step)  # multiples j*step with j*step < t
    n = len(a.states)
    if (int(values + 1).bit_length()) * n > BOUND_BITS:
        return "overflow"
    return (values + 1) ** n - 1
