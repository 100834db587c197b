"""Approximate determinization: bounded unfolding and gap rounding."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .core import INF, Automaton, DiscountFactor, DSAError, Transition
from .determinize import (
    DEFAULT_CAP,
    DeterminizationResult,
    GapVector,
    _require_complete,
    explore,
    successor_costs,
)

UNFOLD_STATE_LIMIT = 10**7


class NotDyadicError(DSAError):
    pass


@dataclass(frozen=True)
class Precision:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 1:
            raise DSAError(f"precision exponent must be a positive integer, got {self.p!r}")

    @property
    def epsilon(self) -> Fraction:
        return Fraction(1, 2**self.p)


@dataclass(frozen=True)
class DyadicDiscount:
    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise DSAError(f"k must be a positive integer, got {self.k!r}")

    @property
    def K(self) -> int:
        return 2**self.k

    @property
    def lam(self) -> Fraction:
        return Fraction(self.K + 1, self.K)

    @classmethod
    def of(cls, lam: Union[DiscountFactor, Fraction], what: str = "this construction") -> "DyadicDiscount":
        v = lam.value if isinstance(lam, DiscountFactor) else Fraction(lam)
        num, den = v.numerator, v.denominator
        if den > 1 and num == den + 1 and den & (den - 1) == 0:
            return cls(den.bit_length() - 1)
        raise NotDyadicError(f"{what} requires λ = 1 + 2^{{-k}} with k ≥ 1, got λ = {v}")


# unfolding


def _word_name(word: tuple[int, ...]) -> str:
    return "w" + ".".join(map(str, word))


def unfold(a: Automaton, l: int) -> Automaton:
    """Depth-l unfolding: exact on words up to length l, mid-weight loops below."""
    _require_complete(a, "unfolding")
    if l < 0:
        raise DSAError("depth must be nonnegative")
    s = len(a.alphabet)
    total = l + 1 if s == 1 else (s ** (l + 1) - 1) // (s - 1)
    if total > UNFOLD_STATE_LIMIT:
        raise DSAError(f"unfolding to depth {l} needs {total} states, limit is {UNFOLD_STATE_LIMIT}")
    lam = a.lam.value
    mid = (a.min_weight + a.max_weight) / 2

    index: dict[tuple[int, ...], int] = {(): 0}
    words: list[tuple[int, ...]] = [()]
    init: list = [INF] * len(a.states)
    init[a.initial] = Fraction(0)
    costs = {(): init}
    transitions = []
    pos = 0
    while pos < len(words):
        w = words[pos]
        src = index[w]
        pos += 1
        if len(w) == l:
            transitions.extend(Transition(src, sym, src, mid) for sym in range(s))
            costs.pop(w, None)
            continue
        cw = costs.pop(w)
        value_w = min(cw)
        scale = lam ** -len(w)
        for sym in range(s):
            nxt: list = [INF] * len(a.states)
            for q, c in enumerate(cw):
                if c == INF:
                    continue
                for dst, wt in a.successors(q, sym):
                    v = c + wt * scale
                    if v < nxt[dst]:
                        nxt[dst] = v
            child = w + (sym,)
            index[child] = len(words)
            words.append(child)
            costs[child] = nxt
            transitions.append(Transition(src, sym, index[child], (min(nxt) - value_w) * lam ** len(w)))
    return Automaton(a.alphabet, tuple(map(_word_name, words)), 0, tuple(transitions), a.lam)


def unfold_error_bound(a: Automaton, l: int) -> Fraction:
    """(V - v) / (2 lambda^(l-1) (lambda - 1))."""
    if l < 0:
        raise DSAError("depth must be nonnegative")
    lam = a.lam.value
    return a.max_weight_difference / (2 * lam ** (l - 1) * (lam - 1))


def min_unfold_depth_generic(a: Automaton, epsilon: Fraction) -> int:
    """Smallest l with unfold_error_bound(a, l) <= epsilon, by exact iteration."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise DSAError("epsilon must be positive")
    m = a.max_weight_difference
    if m == 0:
        return 0
    lam = a.lam.value
    # bound(l) <= eps  <=>  lam^(l-1) >= m / (2 eps (lam - 1))
    need = m / (2 * epsilon * (lam - 1))
    l, power = 0, 1 / lam
    while power < need:
        l += 1
        power *= lam
    return l


def min_unfold_depth(a: Automaton, prec: Precision) -> int:
    DyadicDiscount.of(a.lam, "unfolding depth formula")
    return min_unfold_depth_generic(a, prec.epsilon)


# gap rounding


def round_to_grid(x: Fraction, p: int, k: int) -> Fraction:
    """Nearest multiple of 2^-(p+k-1); exact ties go to the smaller multiple."""
    x = Fraction(x)
    if x < 0:
        raise DSAError(f"cannot round a negative gap: {x}")
    scale = Fraction(2) ** (p + k - 1)
    y = x * scale
    i = math.floor(y)
    if y - i > Fraction(1, 2):
        i += 1
    return i / scale


def rounding_threshold(a: Automaton, dyadic: DyadicDiscount) -> Fraction:
    return a.max_weight_difference * 2 ** (dyadic.k + 1)


def _log_term(m: Fraction) -> int:
    # ceil(log2(ceil(m))), with m < 1 contributing 0
    c = math.ceil(m)
    return 0 if c <= 1 else (c - 1).bit_length()


def rounding_state_bound(a: Automaton, prec: Precision) -> int:
    """2^(n (p + 2k + ceil(log2 ceil(m))))."""
    dy = DyadicDiscount.of(a.lam, "the rounding construction")
    return 2 ** (len(a.states) * (prec.p + 2 * dy.k + _log_term(a.max_weight_difference)))


def approx_determinize_rounding(a: Automaton, prec: Precision, cap: int = DEFAULT_CAP) -> DeterminizationResult:
    _require_complete(a, "determinization")
    dy = DyadicDiscount.of(a.lam, "the rounding construction")
    lam = a.lam.value
    p, k = prec.p, dy.k
    threshold = rounding_threshold(a, dy)

    def step(gv, s):
        ch, c = successor_costs(a, gv, s)
        out = []
        for x in ch:
            if x == INF:
                out.append(INF)
                continue
            g = round_to_grid(lam * (x - c), p, k)
            out.append(INF if g > 0 and g >= threshold else g)
        return GapVector(out), c

    res = explore(a, GapVector.initial(len(a.states), a.initial), step, cap)
    res.stats["bound"] = rounding_state_bound(a, prec)
    res.stats["resolution"] = Fraction(1, 2 ** (p + k - 1))
    return res


def approximate(a: Automaton, epsilon: Fraction, cap: int = DEFAULT_CAP) -> DeterminizationResult:
    """A deterministic automaton within epsilon of ``a``: exact for integral lambda, rounding for dyadic."""
    from .determinize import determinize_exact

    if a.lam.is_integral:
        return determinize_exact(a, cap)
    epsilon = Fraction(epsilon)
    if epsilon <= 0 or epsilon.numerator != 1 or epsilon.denominator & (epsilon.denominator - 1):
        raise DSAError(f"approximation precision must be a power of 1/2, got {epsilon}")
    p = epsilon.denominator.bit_length() - 1
    if p < 1:
        raise DSAError("approximation precision must be below 1")
    return approx_determinize_rounding(a, Precision(p), cap)
