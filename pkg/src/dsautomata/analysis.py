"""Infinite-word values of deterministic automata and approximate comparison decisions.

Optimal values over infinite words are computed by policy iteration with exact
policy evaluation: under a fixed memoryless choice every node has exactly one
successor, so a policy's value is a lasso sum with a closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .algebra import op_sub
from .approx import DyadicDiscount, NotDyadicError, Precision, approx_determinize_rounding
from .core import (
    INF,
    Automaton,
    DSAError,
    Gap,
    NondeterministicError,
    Weight,
    as_fraction,
    cost_vector,
    word_value,
)
from .determinize import DEFAULT_CAP, DeterminizationResult, _require_complete, determinize_exact

# node -> ordered choices (label, successor, weight)
Choices = Sequence[Sequence[tuple[object, int, Fraction]]]


def evaluate_policy(choices: Choices, policy: Sequence[int], lam: Fraction) -> list[Fraction]:
    """Exact value of every node when node i always takes choices[i][policy[i]]."""
    n = len(choices)
    value: list[Optional[Fraction]] = [None] * n
    for start in range(n):
        if value[start] is not None:
            continue
        path, pos = [], {}
        node = start
        while value[node] is None and node not in pos:
            pos[node] = len(path)
            path.append(node)
            node = choices[node][policy[node]][1]
        if value[node] is None:
            # closed a new cycle path[i:]
            i = pos[node]
            cycle = path[i:]
            total, scale = Fraction(0), Fraction(1)
            for c in cycle:
                total += choices[c][policy[c]][2] * scale
                scale /= lam
            value[cycle[0]] = total / (1 - scale)
            for c in reversed(cycle[1:]):
                _, succ, w = choices[c][policy[c]]
                value[c] = w + value[succ] / lam
            path = path[:i]
        for c in reversed(path):
            _, succ, w = choices[c][policy[c]]
            value[c] = w + value[succ] / lam
    return value  # type: ignore[return-value]


def solve(choices: Choices, lam: Fraction, maximize: bool) -> tuple[list[Fraction], list[int]]:
    """Policy iteration.  Starts from the first choice everywhere; ties keep the earlier choice."""
    if any(not c for c in choices):
        raise DSAError("every node needs at least one choice")
    sign = 1 if maximize else -1
    policy = [0] * len(choices)
    while True:
        value = evaluate_policy(choices, policy, lam)
        changed = False
        for node, opts in enumerate(choices):
            best_i, best = None, sign * value[node]
            for i, (_, succ, w) in enumerate(opts):
                q = sign * (w + value[succ] / lam)
                if q > best:
                    best_i, best = i, q
            if best_i is not None:
                policy[node] = best_i
                changed = True
        if not changed:
            return value, policy


@dataclass(frozen=True)
class Valuation:
    values: dict[str, Fraction]
    policy: dict[str, str]

    def __getitem__(self, state: str) -> Fraction:
        return self.values[state]


def _automaton_choices(d: Automaton) -> list[list[tuple[str, int, Fraction]]]:
    out = []
    for q in range(len(d.states)):
        opts = []
        for s, name in enumerate(d.alphabet):
            for dst, w in d.successors(q, s):
                opts.append((name, dst, w))
        out.append(opts)
    return out


def _optimal(d: Automaton, maximize: bool) -> Valuation:
    if not d.deterministic:
        raise NondeterministicError("optimal values require a deterministic automaton")
    _require_complete(d, "optimal value computation")
    choices = _automaton_choices(d)
    value, policy = solve(choices, d.lam.value, maximize)
    return Valuation(
        {d.states[q]: value[q] for q in range(len(d.states))},
        {d.states[q]: choices[q][policy[q]][0] for q in range(len(d.states))},
    )


def sup_value(d: Automaton) -> Valuation:
    """Per-state supremum over infinite words."""
    return _optimal(d, maximize=True)


def inf_value(d: Automaton) -> Valuation:
    """Per-state infimum over infinite words."""
    return _optimal(d, maximize=False)


def bellman_residual(d: Automaton, val: Valuation, maximize: bool = True) -> Fraction:
    lam = d.lam.value
    pick = max if maximize else min
    worst = Fraction(0)
    for q, name in enumerate(d.states):
        best = pick(w + val.values[d.states[dst]] / lam for s in range(len(d.alphabet)) for dst, w in d.successors(q, s))
        worst = max(worst, abs(best - val.values[name]))
    return worst


# ultimately periodic words


@dataclass(frozen=True)
class Lasso:
    """The infinite word prefix . block^omega."""

    prefix: tuple[str, ...]
    block: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "block", tuple(self.block))
        if not self.block:
            raise DSAError("an ultimately periodic word needs a nonempty repeated block")

    def take(self, n: int) -> tuple[str, ...]:
        out = list(self.prefix[:n])
        i = 0
        while len(out) < n:
            out.append(self.block[i % len(self.block)])
            i += 1
        return tuple(out)

    def after(self, u: Sequence[str]) -> "Lasso":
        return Lasso(tuple(u) + self.prefix, self.block)


def lasso_value_deterministic(d: Automaton, word: Lasso) -> Fraction:
    """Closed form: sum over the prefix plus the geometric repetition of the block."""
    if not d.deterministic:
        raise NondeterministicError("closed-form evaluation needs a deterministic automaton")
    lam = d.lam.value

    def walk(q, letters):
        total, scale = Fraction(0), Fraction(1)
        for s in d.encode(letters):
            succ = d.successors(q, s)
            if not succ:
                return None, INF, scale
            q, w = succ[0]
            total += w * scale
            scale /= lam
        return q, total, scale

    q, head, scale_u = walk(d.initial, word.prefix)
    if q is None:
        return INF
    # the state after the prefix and whole blocks eventually repeats
    seen = {}
    states, sums, scales = [], [], []
    while q not in seen:
        seen[q] = len(states)
        nq, s, sc = walk(q, word.block)
        if nq is None:
            return INF
        states.append(q)
        sums.append(s)
        scales.append(sc)
        q = nq
    i = seen[q]
    total, scale = head, scale_u
    for j in range(i):
        total += scale * sums[j]
        scale *= scales[j]
    cyc_sum, cyc_scale = Fraction(0), Fraction(1)
    for j in range(i, len(states)):
        cyc_sum += cyc_scale * sums[j]
        cyc_scale *= scales[j]
    return total + scale * cyc_sum / (1 - cyc_scale)


def lasso_value(a: Automaton, word: Lasso, start: Union[str, int, None] = None) -> Gap:
    """Exact infimum over runs on ``word``; INF when no infinite run exists."""
    a.encode(word.prefix + word.block)
    q0 = a.initial if start is None else a.state_id(start)
    u, b = a.encode(word.prefix), a.encode(word.block)
    positions = len(u) + len(b)

    def letter(i):
        return u[i] if i < len(u) else b[i - len(u)]

    def nxt(i):
        return i + 1 if i + 1 < positions else len(u)

    # product of states and word positions, reachable part only
    index = {(q0, 0): 0}
    nodes = [(q0, 0)]
    raw = []
    i = 0
    while i < len(nodes):
        q, p = nodes[i]
        opts = []
        for dst, w in a.successors(q, letter(p)):
            key = (dst, nxt(p))
            if key not in index:
                index[key] = len(nodes)
                nodes.append(key)
            opts.append((dst, index[key], w))
        raw.append(opts)
        i += 1
    # drop nodes from which no infinite path exists
    alive = [True] * len(nodes)
    changed = True
    while changed:
        changed = False
        for n, opts in enumerate(raw):
            if alive[n] and not any(alive[s] for _, s, _ in opts):
                alive[n] = False
                changed = True
    if not alive[0]:
        return INF
    keep = [n for n in range(len(nodes)) if alive[n]]
    renum = {n: j for j, n in enumerate(keep)}
    choices = [[(lab, renum[s], w) for lab, s, w in raw[n] if alive[s]] for n in keep]
    value, _ = solve(choices, a.lam.value, maximize=False)
    return value[0]


SuffixSpec = Union[Lasso, Sequence[str]]


def _suffix_value(a: Automaton, u: Sequence[str], suffix: SuffixSpec, start=None) -> Gap:
    if isinstance(suffix, Lasso):
        return lasso_value(a, suffix.after(u), start)
    aq = a if start is None else a.with_initial(start)
    return word_value(aq, tuple(u) + tuple(suffix))


def gaps_distinguishable(
    a: Automaton, q: Union[str, int], u: Sequence[str], u2: Sequence[str], w: SuffixSpec, z: SuffixSpec
) -> bool:
    """Whether every deterministic equivalent of ``a`` must separate ``u`` and ``u2``.

    Checks that both words reach ``q`` with different gaps, that ``w`` recovers
    both gaps through ``q``, and that appending ``z`` leaves both values unchanged.
    """
    for s in (w, z):
        if not isinstance(s, (Lasso, list, tuple)):
            raise DSAError(f"malformed suffix: {s!r}")
    if isinstance(w, Lasso) != isinstance(z, Lasso):
        raise DSAError("suffixes w and z must both be finite or both be infinite")
    qi = a.state_id(q)
    lam = a.lam.value
    u, u2 = tuple(u), tuple(u2)
    aq_w = _suffix_value(a, (), w, start=qi)
    if aq_w == INF:
        return False
    for word in (u, u2):
        if cost_vector(a, word)[qi] == INF:
            return False
    if gap_of(a, qi, u) == gap_of(a, qi, u2):
        return False
    for word in (u, u2):
        costs = cost_vector(a, word)
        if _suffix_value(a, word, w) != costs[qi] + aq_w / lam ** len(word):
            return False
        if _suffix_value(a, word, z) != min(costs):
            return False
    return True


def gap_of(a: Automaton, qi: int, u: Sequence[str]) -> Gap:
    costs = cost_vector(a, u)
    if costs[qi] == INF:
        return INF
    return a.lam.value ** len(u) * (costs[qi] - min(costs))


# approximate decisions


@dataclass(frozen=True)
class Decision:
    answer: str
    sup_value: Fraction
    epsilon: Fraction
    semantics: str = "infinite-words"

    def __bool__(self):
        return self.answer == "yes"


def shift_constant(a: Automaton, s: Weight) -> Automaton:
    """Add s (lambda-1)/lambda to every weight, shifting every infinite-word value by s."""
    s = as_fraction(s)
    lam = a.lam.value
    delta = s * (lam - 1) / lam
    return a.map_weights(lambda w: w + delta)


def approximate_quarter(a: Automaton, prec: Precision, cap: int = DEFAULT_CAP) -> DeterminizationResult:
    """A deterministic automaton within epsilon/4 of ``a``."""
    if a.lam.is_integral:
        return determinize_exact(a, cap)
    try:
        DyadicDiscount.of(a.lam)
    except NotDyadicError:
        raise NotDyadicError(
            f"approximate decisions need an integral or dyadic discount factor, got {a.lam}"
        ) from None
    return approx_determinize_rounding(a, Precision(prec.p + 2), cap)


def _decide(m: Fraction, eps: Fraction) -> Decision:
    return Decision("no" if m > eps / 2 else "yes", m, eps)


def approx_compare_geq(a: Automaton, b: Automaton, prec: Precision, cap: int = DEFAULT_CAP) -> Decision:
    """Approximately decide A >= B over infinite words.

    "no" certifies a word with A(w) < B(w); "yes" certifies B(w) - A(w) <= epsilon everywhere.
    """
    if a.lam != b.lam:
        raise DSAError(f"discount factors differ: {a.lam} vs {b.lam}")
    da = approximate_quarter(a, prec, cap).automaton
    db = approximate_quarter(b, prec, cap).automaton
    c = op_sub(db, da)
    m = sup_value(c).values[c.states[c.initial]]
    return _decide(m, prec.epsilon)


def approx_equiv(a: Automaton, b: Automaton, prec: Precision, cap: int = DEFAULT_CAP) -> Decision:
    one = approx_compare_geq(a, b, prec, cap)
    two = approx_compare_geq(b, a, prec, cap)
    answer = "yes" if one and two else "no"
    return Decision(answer, max(one.sup_value, two.sup_value), prec.epsilon)


def approx_universal(a: Automaton, prec: Precision, cap: int = DEFAULT_CAP) -> Decision:
    """Approximately decide A <= 0 over infinite words."""
    d = approximate_quarter(a, prec, cap).automaton
    m = sup_value(d).values[d.states[d.initial]]
    return _decide(m, prec.epsilon)
