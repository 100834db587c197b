"""Closure constructions: min, add, scale, negate, subtract and max."""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from .core import INF, Automaton, DSAError, NondeterministicError, Transition, Weight, as_fraction
from .determinize import DEFAULT_CAP, CapExceeded, _require_complete, determinize_exact

OPS = ("min", "max", "add", "sub", "scale", "neg")

# Which (class, operation) cells admit a construction.  "deterministic" here means
# the result is built for deterministic operands and is itself deterministic.
CLOSURE_TABLE = {
    ("nondeterministic", "min"): True,
    ("nondeterministic", "max"): False,
    ("nondeterministic", "add"): True,
    ("nondeterministic", "sub"): False,
    ("nondeterministic", "scale"): True,
    ("nondeterministic", "neg"): False,
    ("deterministic", "min"): False,
    ("deterministic", "max"): False,
    ("deterministic", "add"): True,
    ("deterministic", "sub"): True,
    ("deterministic", "scale"): True,
    ("deterministic", "neg"): True,
    ("integral", "min"): True,
    ("integral", "max"): True,
    ("integral", "add"): True,
    ("integral", "sub"): True,
    ("integral", "scale"): True,
    ("integral", "neg"): True,
}


class ClosureError(DSAError):
    pass


class PairGapState(NamedTuple):
    p: int
    gp: Union[Fraction, float]
    q: int
    gq: Union[Fraction, float]


def _check_compatible(a: Automaton, b: Automaton) -> Automaton:
    """Return ``b`` re-indexed onto ``a``'s alphabet order."""
    if a.lam != b.lam:
        raise ClosureError(f"discount factors differ: {a.lam} vs {b.lam}")
    if set(a.alphabet) != set(b.alphabet):
        raise ClosureError("alphabets differ")
    _require_complete(a, "this operation")
    _require_complete(b, "this operation")
    if a.alphabet == b.alphabet:
        return b
    remap = [a.symbol_index[s] for s in b.alphabet]
    ts = tuple(Transition(t.src, remap[t.symbol], t.dst, t.weight) for t in b.transitions)
    return Automaton(a.alphabet, b.states, b.initial, ts, b.lam)


def _require_deterministic(a: Automaton, what: str):
    if not a.deterministic:
        raise NondeterministicError(f"{what} requires deterministic input")


def _unique_names(candidates: Sequence[str], prefix: str) -> tuple[str, ...]:
    if len(set(candidates)) == len(candidates):
        return tuple(candidates)
    return tuple(f"{prefix}{i}" for i in range(len(candidates)))


def op_min(a: Automaton, b: Automaton) -> Automaton:
    b = _check_compatible(a, b)
    na, nb = len(a.states), len(b.states)
    names = ["init"] + [f"A.{q}" for q in a.states] + [f"B.{q}" for q in b.states]
    ts = []
    for src_auto, offset in ((a, 1), (b, 1 + na)):
        for t in src_auto.transitions:
            if t.src == src_auto.initial:
                ts.append(Transition(0, t.symbol, t.dst + offset, t.weight))
    ts += [Transition(t.src + 1, t.symbol, t.dst + 1, t.weight) for t in a.transitions]
    ts += [Transition(t.src + 1 + na, t.symbol, t.dst + 1 + na, t.weight) for t in b.transitions]
    assert len(names) == 1 + na + nb
    return Automaton(a.alphabet, _unique_names(names, "s"), 0, tuple(ts), a.lam)


def _product(a: Automaton, b: Automaton, combine) -> Automaton:
    start = (a.initial, b.initial)
    index = {start: 0}
    order = [start]
    ts = []
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        src = index[(p, q)]
        for s in range(len(a.alphabet)):
            for pd, pw in a.successors(p, s):
                for qd, qw in b.successors(q, s):
                    key = (pd, qd)
                    if key not in index:
                        index[key] = len(order)
                        order.append(key)
                        queue.append(key)
                    ts.append(Transition(src, s, index[key], combine(pw, qw)))
    names = _unique_names([f"({a.states[p]},{b.states[q]})" for p, q in order], "s")
    return Automaton(a.alphabet, names, 0, tuple(ts), a.lam)


def op_add(a: Automaton, b: Automaton) -> Automaton:
    b = _check_compatible(a, b)
    return _product(a, b, lambda x, y: x + y)


def op_sub(d1: Automaton, d2: Automaton) -> Automaton:
    """D1 - D2, for deterministic operands."""
    _require_deterministic(d1, "subtraction")
    _require_deterministic(d2, "subtraction")
    d2 = _check_compatible(d1, d2)
    return _product(d1, d2, lambda x, y: x - y)


def op_scale(a: Automaton, c: Weight) -> Automaton:
    c = as_fraction(c)
    if c < 0 and not a.deterministic:
        raise NondeterministicError("negative scaling requires deterministic input")
    return a.map_weights(lambda w: c * w)


def op_neg(d: Automaton) -> Automaton:
    _require_deterministic(d, "negation")
    _require_complete(d, "negation")
    return d.map_weights(lambda w: -w)


def _max_weight_spread(a: Automaton, b: Automaton) -> Fraction:
    """max |x - y| over a weight x of A and a weight y of B."""
    return max(abs(a.max_weight - b.min_weight), abs(b.max_weight - a.min_weight))


def op_max_integral(a: Automaton, b: Automaton, cap: int = DEFAULT_CAP) -> Automaton:
    """Deterministic automaton for max(A, B); requires an integral discount factor."""
    return max_construction(a, b, cap)[0]


def max_construction(a: Automaton, b: Automaton, cap: int = DEFAULT_CAP) -> tuple[Automaton, tuple[PairGapState, ...]]:
    """The max product together with the pair state behind each result state.

    Each state pairs a state of each (determinized) operand with its gap below
    the running maximum; gaps that can no longer be recovered become INF.
    """
    b = _check_compatible(a, b)
    if not a.lam.is_integral:
        raise ClosureError("max closure guaranteed only for integral factors")
    da = a if a.deterministic else determinize_exact(a, cap).automaton
    db = b if b.deterministic else determinize_exact(b, cap).automaton
    lam = a.lam.value
    threshold = 2 * _max_weight_spread(da, db)

    def clamp(x):
        return INF if x > 0 and x >= threshold else x

    start = PairGapState(da.initial, Fraction(0), db.initial, Fraction(0))
    index = {start: 0}
    order = [start]
    ts = []
    queue = deque([start])
    while queue:
        state = queue.popleft()
        p, gp, q, gq = state
        src = index[state]
        for s in range(len(da.alphabet)):
            (pd, wa), = da.successors(p, s)
            (qd, wb), = db.successors(q, s)
            ra = None if gp == INF else wa - gp
            rb = None if gq == INF else wb - gq
            c = max(r for r in (ra, rb) if r is not None)
            ngp = INF if ra is None else clamp(lam * (c - ra))
            ngq = INF if rb is None else clamp(lam * (c - rb))
            key = PairGapState(pd, ngp, qd, ngq)
            if key not in index:
                if len(order) >= cap:
                    raise CapExceeded(len(order) + 1, cap)
                index[key] = len(order)
                order.append(key)
                queue.append(key)
            ts.append(Transition(src, s, index[key], c))
    names = tuple(f"m{i}" for i in range(len(order)))
    return Automaton(da.alphabet, names, 0, tuple(ts), da.lam), tuple(order)


def automaton_classes(a: Automaton) -> list[str]:
    """Every closure-table row ``a`` belongs to."""
    out = ["nondeterministic"]
    if a.deterministic:
        out.append("deterministic")
    if a.lam.is_integral:
        out.append("integral")
    return out


def supported(op: str, a: Automaton) -> bool:
    return any(CLOSURE_TABLE[(cls, op)] for cls in automaton_classes(a))


def compose(op: str, operands: Sequence[Automaton], scalar: Optional[Weight] = None, cap: int = DEFAULT_CAP) -> Automaton:
    """Dispatch an operation by name, determinizing integral operands where needed."""
    if op not in OPS:
        raise ClosureError(f"unknown operation {op!r}; expected one of {', '.join(OPS)}")
    arity = 1 if op in ("scale", "neg") else 2
    if len(operands) != arity:
        raise ClosureError(f"{op} takes {arity} operand(s), got {len(operands)}")
    if op == "scale" and scalar is None:
        raise ClosureError("scale needs a scalar")

    negative_scale = op == "scale" and as_fraction(scalar) < 0
    cell = "neg" if negative_scale else op
    for x in operands:
        if not supported(cell, x):
            raise ClosureError(f"{cell} is not supported for {automaton_classes(x)[-1]} automata")

    if op == "min":
        return op_min(*operands)
    if op == "max":
        return op_max_integral(*operands, cap=cap)
    if op == "add":
        return op_add(*operands)

    def det(x):
        return x if x.deterministic else determinize_exact(x, cap).automaton

    if op == "sub":
        return op_sub(det(operands[0]), det(operands[1]))
    if op == "neg":
        return op_neg(det(operands[0]))
    x = operands[0]
    return op_scale(det(x) if negative_scale else x, scalar)
