"""Generators for the lower-bound and counterexample automata, with their checkable properties.

Letters with a numeric meaning are named by ``str(Fraction)`` (``"-1/3"``,
``"2"``); tuple letters are written ``"(-4;1)"``.  Each ``family_properties``
check evaluates the generated automaton itself, so a mismatch between a
generator and its witness words shows up as a failed check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from .analysis import Lasso, gap_of, gaps_distinguishable, lasso_value
from .core import INF, Automaton, DSAError, cost_vector, word_value

FAMILIES = (
    "last_by_k",
    "weight_lb",
    "combined_lb",
    "nondeterminizable",
    "incomplete_b",
    "precision_lb",
    "discount_lb",
    "statecount_lb",
    "nomax_pair",
)


class FamilyError(DSAError):
    pass


def letter(x) -> str:
    return str(Fraction(x))


def tuple_letter(xs) -> str:
    return "(" + ";".join(letter(x) for x in xs) + ")"


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in FAMILIES:
            raise FamilyError(f"unknown family {self.name!r}; expected one of {', '.join(FAMILIES)}")
        object.__setattr__(self, "params", dict(self.params))

    def get(self, key: str, default=None, kind: Callable = int):
        if key in self.params:
            return kind(self.params[key])
        if default is None:
            raise FamilyError(f"{self.name} needs parameter {key!r}")
        return default


def _int_param(spec: FamilySpec, key: str, default=None, minimum: int = 0) -> int:
    v = spec.get(key, default, Fraction)
    if v.denominator != 1:
        raise FamilyError(f"{spec.name}: {key} must be an integer, got {v}")
    v = int(v)
    if v < minimum:
        raise FamilyError(f"{spec.name}: {key} must be at least {minimum}, got {v}")
    return v


def _integral_lambda(spec: FamilySpec, default=2) -> int:
    lam = spec.get("lambda", Fraction(default), Fraction)
    if lam.denominator != 1 or lam < 2:
        raise FamilyError(f"{spec.name}: lambda must be an integer >= 2, got {lam}")
    return int(lam)


def _two_branch(letters: list[Fraction], lam) -> Automaton:
    """q_in splits into a zero branch q1 and a branch q2 that pays each letter's value."""
    names = [letter(x) for x in letters]
    ts = []
    for name, x in zip(names, letters):
        for q in ("q_in", "q1", "q2"):
            if q != "q2":
                ts.append((q, name, "q1", 0))
            if q != "q1":
                ts.append((q, name, "q2", x))
    return Automaton.build(names, ["q_in", "q1", "q2"], "q_in", ts, lam)


def _stay_or_quit(letters: list[Fraction], lam) -> Automaton:
    """q2 (initial) pays each letter's value and may quit, at no cost, into a zero loop q1."""
    names = [letter(x) for x in letters]
    ts = []
    for name, x in zip(names, letters):
        ts += [("q2", name, "q2", x), ("q2", name, "q1", 0), ("q1", name, "q1", 0)]
    return Automaton.build(names, ["q2", "q1"], "q2", ts, lam)


# individual families


def last_by_k(k: int, lam=2) -> Automaton:
    """Guess an a at the k-th position from the end; reading # from the accepting guess costs -1.

    The guessing automaton has states p0..pk, so the guessed a is the k-th
    last letter (k = 1: the last letter).
    """
    if k < 1:
        raise FamilyError("last_by_k: k must be at least 1")
    ps = [f"p{i}" for i in range(k + 1)]
    states = ps + ["s_neg", "s_zero"]
    ts = [("p0", "a", "p0", 0), ("p0", "b", "p0", 0), ("p0", "a", "p1", 0)]
    for i in range(1, k):
        ts += [(ps[i], "a", ps[i + 1], 0), (ps[i], "b", ps[i + 1], 0)]
    for p in ps[:-1]:
        ts.append((p, "#", "s_zero", 0))
    ts += [(ps[k], "a", "s_zero", 0), (ps[k], "b", "s_zero", 0), (ps[k], "#", "s_neg", -1)]
    for s in ("s_neg", "s_zero"):
        ts += [(s, x, s, 0) for x in "ab#"]
    return Automaton.build(["a", "b", "#"], states, "p0", ts, lam)


def weight_lb(lam: int, k: int) -> Automaton:
    if k <= lam:
        raise FamilyError(f"weight_lb: k must exceed lambda, got k={k}, lambda={lam}")
    letters = [Fraction(-k)] + [Fraction(x) for x in range(-lam + 1, 2)]
    return _two_branch(letters, lam)


def weight_lb_word(lam: int, x: int) -> tuple[str, ...]:
    """Base-lambda digits of x >= 1 with digits in {-lambda+2, ..., 1}; gap(q2) = lambda * x."""
    if x < 1:
        raise FamilyError("weight_lb words exist for x >= 1")
    digits = []
    while x != 1:
        d = 1 - (1 - x) % lam
        digits.append(d)
        x = (x - d) // lam
    digits.append(1)
    return tuple(letter(d) for d in reversed(digits))


def combined_lb(lam: int, k: int, l: int) -> Automaton:
    if k < 1 or l < 1:
        raise FamilyError("combined_lb: k and l must be at least 1")
    values = range(-lam * k, 2)
    tuples = list(itertools.product(values, repeat=l))
    names = [tuple_letter(t) for t in tuples]
    states = ["q_in"] + [f"q{i}" for i in range(l + 1)]
    ts = []
    for name, t in zip(names, tuples):
        for i in range(l + 1):
            ts.append(("q_in", name, f"q{i}", 0))
            ts.append((f"q{i}", name, f"q{i}", 0 if i == 0 else t[i - 1]))
    return Automaton.build(names, states, "q_in", ts, lam)


def combined_lb_word(lam: int, gaps: tuple[int, ...]) -> tuple[str, ...]:
    """One letter per base-lambda position; coordinate i reaches gap lambda * gaps[i].

    The first letter only moves out of q_in at no cost, so it is all zeros.
    """
    per = [weight_lb_word(lam, g) for g in gaps]
    n = max(map(len, per))
    padded = [("0",) * (n + 1 - len(w)) + w for w in per]
    return tuple(tuple_letter(Fraction(col[j]) for col in padded) for j in range(n + 1))


def nondeterminizable(h: int, k: int) -> Automaton:
    lam = Fraction(h, k)
    if math.gcd(h, k) != 1 or k < 2 or lam <= 1:
        raise FamilyError(f"nondeterminizable: need coprime h > k >= 2, got h={h}, k={k}")
    letters = [Fraction(-j * k) for j in range(0, (h - 1) // k + 1)] + [Fraction(-h), Fraction(k)]
    return _two_branch(letters, lam)


def greedy_gaps(h: int, k: int, n: int) -> tuple[list[str], list[Fraction]]:
    """The first n letters of the greedy word and q2's gap after each prefix."""
    lam = Fraction(h, k)
    word, gaps = [letter(k)], [Fraction(h)]
    while len(word) < n:
        j = math.floor(gaps[-1] / k)
        word.append(letter(-j * k))
        gaps.append((gaps[-1] - j * k) * lam)
    return word, gaps


def incomplete_b(lam) -> Automaton:
    lam = Fraction(lam)
    ts = [
        ("q0", "a", "q1", 0),
        ("q0", "a", "q2", (1 + lam) / lam),
        ("q0", "b", "q2", 0),
        ("q1", "a", "q1", 0),
        ("q2", "a", "q2", 1 / lam),
        ("q2", "b", "q2", 0),
    ]
    return Automaton.build(["a", "b"], ["q0", "q1", "q2"], "q0", ts, lam)


PRECISION_LETTERS = [Fraction(x, 3) for x in (0, 1, 2, -1, -2, -3)]


def precision_lb() -> Automaton:
    return _stay_or_quit(PRECISION_LETTERS, Fraction(3, 2))


def precision_lb_word(l: int, i: int) -> tuple[str, ...]:
    """A word of length l on which q2's gap is i / 2^l, for 0 <= i <= 2^l."""
    if l < 1 or not 0 <= i <= 2**l:
        raise FamilyError(f"precision_lb words need l >= 1 and 0 <= i <= 2^l, got l={l}, i={i}")
    if l == 1:
        return (letter(Fraction(i, 3)),)
    half = 2 ** (l - 1)
    r = i % 3
    if r == 0:
        return precision_lb_word(l - 1, i // 3) + ("0",)
    if half % 3 != r:
        return precision_lb_word(l - 1, (i + half) // 3) + (letter(Fraction(-1, 3)),)
    if i <= half:
        return precision_lb_word(l - 1, (i + 2 * half) // 3) + (letter(Fraction(-2, 3)),)
    return precision_lb_word(l - 1, (i - half) // 3) + (letter(Fraction(1, 3)),)


def discount_lb(k: int) -> Automaton:
    if k < 1:
        raise FamilyError("discount_lb: k must be at least 1")
    K = 2**k
    return _stay_or_quit([Fraction(1), Fraction(0), Fraction(-1)], Fraction(K + 1, K))


def discount_lb_word(k: int, i: int) -> tuple[str, ...]:
    half = 2**k // 2
    if not 1 <= i <= half:
        raise FamilyError(f"discount_lb words need 1 <= i <= 2^k/2, got {i}")
    return ("1",) * i + ("0",) * (half - i)


def statecount_lb(k: int, n: int) -> Automaton:
    """A hub that commits, on the first letter, to one counter q_i or to a zero sink."""
    if k < 3 or not 1 <= n <= 2**k:
        raise FamilyError(f"statecount_lb: need k >= 3 and 1 <= n <= 2^k, got k={k}, n={n}")
    K = 2**k
    names = ["0"] + [f"1_{i}" for i in range(1, n + 1)] + [f"-1_{i}" for i in range(1, n + 1)]
    qs = [f"q{i}" for i in range(1, n + 1)]
    ts = []
    for a in names:
        ts.append(("q0", a, "qz", 0))
        ts.append(("qz", a, "qz", 0))
        for i, q in enumerate(qs, start=1):
            ts.append(("q0", a, q, 1 if a == f"1_{i}" else 0))
            ts.append((q, a, q, 1 if a == f"1_{i}" else -1 if a == f"-1_{i}" else 0))
    return Automaton.build(names, ["q0"] + qs + ["qz"], "q0", ts, Fraction(K + 1, K))


def statecount_lb_word(bits: tuple[int, ...]) -> tuple[str, ...]:
    return tuple(f"1_{i}" if b else "0" for i, b in enumerate(bits, start=1))


NOMAX_LETTERS = [Fraction(0), Fraction(2, 5), Fraction(-1, 8), Fraction(-1, 4), Fraction(-1, 2), Fraction(-1)]


def nomax_pair() -> tuple[Automaton, Automaton]:
    names = [letter(x) for x in NOMAX_LETTERS]
    lam = Fraction(5, 2)
    a = Automaton.build(names, ["a"], "a", [("a", s, "a", 0) for s in names], lam)
    b = Automaton.build(names, ["b"], "b", [("b", s, "b", x) for s, x in zip(names, NOMAX_LETTERS)], lam)
    return a, b


_NOMAX_BASE = {0: ("0",), 1: ("2/5", "-1/2", "-1"), 2: ("2/5", "-1/2")}


def nomax_word(j: int, k: int) -> tuple[str, ...]:
    """A word on which lambda^|u| B(u) = 5j / 2^k, for k >= 3 and 0 <= j <= 2^k / 3."""
    if k < 3 or not 0 <= 3 * j <= 2**k:
        raise FamilyError(f"nomax words need k >= 3 and 0 <= j <= 2^k/3, got j={j}, k={k}")
    if k == 3:
        return _NOMAX_BASE[j]
    half = 2 ** (k - 1)
    for v in (Fraction(0), Fraction(-1), Fraction(-1, 2), Fraction(-1, 4), Fraction(-1, 8)):
        num = j - v * half
        if num % 5 == 0:
            return nomax_word(int(num // 5), k - 1) + (letter(v),)
    raise AssertionError("no residue matched")  # the five residues cover Z/5


# dispatch


def generate(spec: Union[FamilySpec, str], **params) -> Union[Automaton, tuple[Automaton, Automaton]]:
    if isinstance(spec, str):
        spec = FamilySpec(spec, params)
    n = spec.name
    if n == "last_by_k":
        return last_by_k(_int_param(spec, "k", minimum=1), _integral_lambda(spec))
    if n == "weight_lb":
        return weight_lb(_integral_lambda(spec), _int_param(spec, "k", minimum=1))
    if n == "combined_lb":
        return combined_lb(_integral_lambda(spec), _int_param(spec, "k", minimum=1), _int_param(spec, "l", minimum=1))
    if n == "nondeterminizable":
        return nondeterminizable(_int_param(spec, "h", 5, 2), _int_param(spec, "k", 2, 2))
    if n == "incomplete_b":
        lam = spec.get("lambda", Fraction(2), Fraction)
        if lam <= 1:
            raise FamilyError(f"incomplete_b: lambda must exceed 1, got {lam}")
        return incomplete_b(lam)
    if n == "precision_lb":
        return precision_lb()
    if n == "discount_lb":
        return discount_lb(_int_param(spec, "k", minimum=1))
    if n == "statecount_lb":
        return statecount_lb(_int_param(spec, "k", 3, 3), _int_param(spec, "n", minimum=1))
    return nomax_pair()


@dataclass
class PropertyReport:
    family: str
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append((name, bool(ok), detail))

    def failures(self) -> list[tuple[str, bool, str]]:
        return [c for c in self.checks if not c[1]]

    def __str__(self):
        lines = [f"{self.family}: {'ok' if self.ok else 'FAILED'}"]
        lines += [f"  [{'ok' if ok else 'FAIL'}] {name}{': ' + d if d else ''}" for name, ok, d in self.checks]
        return "\n".join(lines)


def _expect(report: PropertyReport, name: str, got, want):
    report.add(name, got == want, "" if got == want else f"got {got}, expected {want}")


def family_properties(spec: Union[FamilySpec, str], greedy_length: int = 100, **params) -> PropertyReport:
    """Machine-check the quantitative facts each family is built to exhibit."""
    if isinstance(spec, str):
        spec = FamilySpec(spec, params)
    rep = PropertyReport(spec.name)
    a = generate(spec)
    if spec.name == "nomax_pair":
        _check_nomax(rep, *a, spec)
        return rep
    rep.add("completeness as constructed", a.complete == (spec.name != "incomplete_b"))
    _CHECKS[spec.name](rep, a, spec, greedy_length)
    return rep


def _check_last_by_k(rep, a, spec, _):
    k = _int_param(spec, "k", minimum=1)
    bad = []
    for n in range(0, k + 4):
        for x in itertools.product("ab", repeat=n):
            in_lang = n >= k and x[n - k] == "a"
            for tail in ((), ("a", "b")):
                v = word_value(a, x + ("#",) + tail)
                if (v < 0) != in_lang:
                    bad.append("".join(x))
            inf = lasso_value(a, Lasso(x + ("#",), ("a",)))
            if (inf < 0) != in_lang:
                bad.append("".join(x) + "#a^w")
            if word_value(a, x) != 0:
                bad.append("".join(x) + " (no #)")
    rep.add("value < 0 iff the prefix before # has a at the k-th last position", not bad, ", ".join(bad[:5]))


def _check_weight_lb(rep, a, spec, _):
    lam, k = _integral_lambda(spec), _int_param(spec, "k", minimum=1)
    q2 = a.state_id("q2")
    top = k // (lam - 1)
    for x in range(1, top + 1):
        _expect(rep, f"gap(q2, u_{x}) = {lam}*{x}", gap_of(a, q2, weight_lb_word(lam, x)), lam * x)
    w, z = Lasso((), (letter(-k),)), Lasso((), ("0",))
    for x in range(lam, top):
        ok = gaps_distinguishable(a, "q2", weight_lb_word(lam, x), weight_lb_word(lam, x + 1), w, z)
        rep.add(f"u_{x} and u_{x + 1} are gap-distinguishable", ok)


def _check_combined_lb(rep, a, spec, _):
    lam, k, l = _integral_lambda(spec), _int_param(spec, "k", minimum=1), _int_param(spec, "l", minimum=1)
    ids = [a.state_id(f"q{i}") for i in range(1, l + 1)]
    bad = []
    for gaps in itertools.product(range(1, k + 1), repeat=l):
        u = combined_lb_word(lam, gaps)
        got = [gap_of(a, q, u) for q in ids]
        if got != [lam * g for g in gaps]:
            bad.append(f"{gaps}: {got}")
    rep.add(f"every combined gap in {{1..{k}}}^{l} is reachable", not bad, "; ".join(bad[:3]))
    z = Lasso((), (tuple_letter([0] * l),))
    for j in range(l):
        w = Lasso((), (tuple_letter([-lam * k if i == j else 0 for i in range(l)]),))
        g1 = tuple(1 if i == j else k for i in range(l))
        g2 = tuple(k for _ in range(l))
        if g1 == g2:
            continue
        ok = gaps_distinguishable(a, f"q{j + 1}", combined_lb_word(lam, g1), combined_lb_word(lam, g2), w, z)
        rep.add(f"combined gaps differing in coordinate {j + 1} are distinguishable", ok)


def _check_nondeterminizable(rep, a, spec, n):
    h, k = _int_param(spec, "h", 5, 2), _int_param(spec, "k", 2, 2)
    word, gaps = greedy_gaps(h, k, n)
    rep.add(f"greedy word yields {n} pairwise-distinct gaps", len(set(gaps)) == n, f"{len(set(gaps))} distinct")
    rep.add("no greedy gap is zero", all(g > 0 for g in gaps))
    rep.add(f"every greedy gap is at most h = {h}", all(g <= h for g in gaps))
    q2 = a.state_id("q2")
    prefix = min(n, 12)
    measured = [gap_of(a, q2, word[: i + 1]) for i in range(prefix)]
    _expect(rep, f"automaton gaps match the recurrence on the first {prefix} prefixes", measured, gaps[:prefix])
    _expect(rep, 'cost(q2, "k") = k', cost_vector(a, (letter(k),))[q2], k)


def _check_incomplete_b(rep, a, spec, _):
    lam = a.lam.value
    q2 = a.state_id("q2")
    bad = [n for n in range(1, 9) if gap_of(a, q2, ("a",) * n) != sum(lam**i for i in range(n + 1))]
    rep.add("gap(q2, a^n) = sum of lambda^i for i = 0..n", not bad, f"fails at n in {bad}")
    rep.add("q1 has no b transition", not a.successors(a.state_id("q1"), a.symbol_index["b"]))
    w, z = Lasso((), ("b",)), Lasso((), ("a",))
    rep.add("a and aa are gap-distinguishable", gaps_distinguishable(a, "q2", ("a",), ("a", "a"), w, z))
    rep.add("finite-word witnesses a, aaa with w = b", gaps_distinguishable(a, "q2", ("a",), ("a",) * 3, ("b",), ()))


def _check_precision_lb(rep, a, spec, _):
    top = _int_param(spec, "l", 6, 1)
    q2 = a.state_id("q2")
    recover = lasso_value(a, Lasso((), ("-1",)), start=q2)
    for l in range(1, top + 1):
        bad = []
        for i in range(2**l + 1):
            u = precision_lb_word(l, i)
            g = gap_of(a, q2, u)
            if len(u) != l or g != Fraction(i, 2**l):
                bad.append(f"i={i}: {g}")
            elif g + recover > 0:
                bad.append(f"i={i}: not recoverable")
        rep.add(f"gaps i/2^{l} for i = 0..2^{l} on words of length {l}", not bad, "; ".join(bad[:3]))


def _check_discount_lb(rep, a, spec, _):
    k = _int_param(spec, "k", minimum=1)
    half = 2**k // 2
    q2 = a.state_id("q2")
    recover = lasso_value(a, Lasso((), ("-1",)), start=q2)
    costs, unrecoverable = [], []
    for i in range(1, half + 1):
        u = discount_lb_word(k, i)
        c = cost_vector(a, u)
        costs.append(c[q2])
        if word_value(a, u) != 0 or gap_of(a, q2, u) + recover > 0:
            unrecoverable.append(i)
    rep.add("q2's gap is recoverable by (-1)^w on every u_i", not unrecoverable, f"fails for {unrecoverable}")
    diffs = [abs(x - y) for x, y in itertools.combinations(costs, 2)]
    rep.add("costs of reaching q2 differ pairwise by more than 1/2", all(d > Fraction(1, 2) for d in diffs))
    if half >= 2:
        w, z = Lasso((), ("-1",)), Lasso((), ("0",))
        ok = gaps_distinguishable(a, "q2", discount_lb_word(k, 1), discount_lb_word(k, 2), w, z)
        rep.add("u_1 and u_2 are gap-distinguishable", ok)


def _check_statecount_lb(rep, a, spec, _):
    n = _int_param(spec, "n", minimum=1)
    third = Fraction(1, 3)
    ids = [a.state_id(f"q{i}") for i in range(1, n + 1)]
    bad = []
    for bits in itertools.product((0, 1), repeat=n):
        u = statecount_lb_word(bits)
        costs = cost_vector(a, u)
        if word_value(a, u) != 0:
            bad.append(f"{bits}: value {word_value(a, u)}")
        for i, q in enumerate(ids):
            if (costs[q] > third) != bool(bits[i]) or (not bits[i] and costs[q] != 0):
                bad.append(f"{bits}: cost(q{i + 1}) = {costs[q]}")
    rep.add("cost(q_i, u_b) > 1/3 iff bit i of b is 1, and 0 otherwise", not bad, "; ".join(bad[:3]))
    # one witness pair per coordinate
    z = Lasso((), ("0",))
    for i in range(1, n + 1):
        ones = tuple(1 for _ in range(n))
        other = tuple(0 if j == i else 1 for j in range(1, n + 1))
        w = Lasso((), (f"-1_{i}",))
        ok = gaps_distinguishable(a, f"q{i}", statecount_lb_word(ones), statecount_lb_word(other), w, z)
        rep.add(f"words differing in bit {i} are gap-distinguishable", ok)


def _check_nomax(rep, a, b, spec):
    top = _int_param(spec, "k", 8, 3)
    lam = b.lam.value
    rep.add("A is constantly zero", all(t.weight == 0 for t in a.transitions))
    rep.add("both operands deterministic and complete", a.deterministic and b.deterministic and a.complete and b.complete)
    for k in range(3, top + 1):
        bad = []
        for j in range(0, 2**k // 3 + 1):
            u = nomax_word(j, k)
            g = lam ** len(u) * word_value(b, u)
            if g != Fraction(5 * j, 2**k):
                bad.append(f"j={j}: {g}")
        rep.add(f"gap(B, u_(j,{k})) = 5j/2^{k} for 0 <= j <= 2^{k}/3", not bad, "; ".join(bad[:3]))


_CHECKS = {
    "last_by_k": _check_last_by_k,
    "weight_lb": _check_weight_lb,
    "combined_lb": _check_combined_lb,
    "nondeterminizable": _check_nondeterminizable,
    "incomplete_b": _check_incomplete_b,
    "precision_lb": _check_precision_lb,
    "discount_lb": _check_discount_lb,
    "statecount_lb": _check_statecount_lb,
}
