import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import single_state
from dsautomata import families
from dsautomata.algebra import (
    CLOSURE_TABLE,
    OPS,
    ClosureError,
    compose,
    max_construction,
    op_add,
    op_max_integral,
    op_min,
    op_neg,
    op_scale,
    op_sub,
    supported,
)
from dsautomata.core import INF, Automaton, DSAError, all_word_values, brute_force_table, constant_automaton, zero_automaton
from dsautomata.randomgen import random_automaton

AB = ["a", "b"]


def values(a, n=4):
    return all_word_values(a, n)


def pointwise(f, *autos, n=4):
    tables = [brute_force_table(x, n) for x in autos]
    return {w: f(*(t[w] for t in tables)) for w in tables[0]}


class TestMin:
    def test_idempotent(self):
        a = random_automaton(random.Random(1), 2, 3, 2)
        assert values(op_min(a, a)) == values(a)

    def test_constants(self):
        x, y = constant_automaton(AB, 3, 2), constant_automaton(AB, -1, 2)
        assert values(op_min(x, y)) == values(y)

    def test_huge_operand(self):
        a = random_automaton(random.Random(2), 2, 3, 2)
        huge = constant_automaton(AB, 10**6, 2)
        assert values(op_min(a, huge), 5) == brute_force_table(a, 5)

    def test_mismatch(self):
        with pytest.raises(ClosureError, match="discount"):
            op_min(zero_automaton(AB, 2), zero_automaton(AB, 3))
        with pytest.raises(ClosureError, match="alphabet"):
            op_min(zero_automaton(AB, 2), zero_automaton(["a"], 2))

    def test_alphabet_order_independent(self):
        a = single_state({"a": 1, "b": 0}, 2)
        b = single_state({"b": 5, "a": -1}, 2)
        assert values(op_min(a, b)) == pointwise(min, a, b)


class TestAdd:
    def test_zero_identity(self):
        a = random_automaton(random.Random(3), 3, 3, 2)
        assert values(op_add(a, zero_automaton(AB, 3))) == values(a)

    def test_deterministic_stays(self):
        r = random.Random(4)
        a, b = (random_automaton(r, 2, 2, 2, deterministic=True) for _ in range(2))
        c = op_add(a, b)
        assert c.deterministic and c.complete
        assert values(c) == pointwise(lambda x, y: x + y, a, b)


class TestScaleNeg:
    def test_zero_and_one(self):
        a = random_automaton(random.Random(5), 2, 3, 2)
        assert all(t.weight == 0 for t in op_scale(a, 0).transitions)
        assert values(op_scale(a, 1)) == values(a)

    def test_three_halves(self):
        a = random_automaton(random.Random(6), 2, 3, 2)
        assert values(op_scale(a, F(3, 2))) == pointwise(lambda x: F(3, 2) * x, a)

    def test_negative_needs_deterministic(self):
        a = families.weight_lb(2, 4)
        with pytest.raises(DSAError, match="deterministic"):
            op_scale(a, -1)

    def test_neg(self):
        d = random_automaton(random.Random(7), 2, 3, 2, deterministic=True)
        assert op_neg(op_neg(d)) == d
        c = op_neg(constant_automaton(["a"], 1, 2))
        assert all_word_values(c, 2)[("a", "a")] == F(-3, 2)
        z = zero_automaton(AB, 2)
        assert values(op_neg(z)) == values(z)
        with pytest.raises(DSAError, match="deterministic"):
            op_neg(families.weight_lb(2, 4))


class TestSub:
    def test_self_is_zero(self):
        d = random_automaton(random.Random(8), 2, 3, 2, deterministic=True)
        assert set(values(op_sub(d, d)).values()) == {0}

    def test_zero_identity(self):
        d = random_automaton(random.Random(9), 2, 3, 2, deterministic=True)
        assert values(op_sub(d, zero_automaton(AB, 2))) == values(d)

    def test_constants(self):
        x, y = constant_automaton(AB, 3, 2), constant_automaton(AB, F(1, 2), 2)
        assert values(op_sub(x, y)) == values(constant_automaton(AB, F(5, 2), 2))

    def test_rejects_nondeterministic(self):
        with pytest.raises(DSAError, match="deterministic"):
            op_sub(families.weight_lb(2, 4), families.weight_lb(2, 4))


class TestMax:
    def test_idempotent(self):
        a = random_automaton(random.Random(10), 2, 3, 2)
        assert values(op_max_integral(a, a)) == values(a)

    def test_constants(self):
        x, y = constant_automaton(AB, 3, 2), constant_automaton(AB, -1, 2)
        assert values(op_max_integral(x, y)) == values(x)

    def test_weight_lb_vs_zero(self):
        a = families.weight_lb(2, 4)
        z = zero_automaton(a.alphabet, 2)
        assert values(op_max_integral(a, z), 4) == pointwise(lambda x, y: max(x, y), a, z)

    def test_nonintegral_rejected(self):
        a, b = families.nomax_pair()
        with pytest.raises(ClosureError, match="integral"):
            op_max_integral(a, b)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32), st.sampled_from([2, 3]), st.booleans())
    def test_pair_invariants(self, seed, lam, det):
        r = random.Random(seed)
        a = random_automaton(r, lam, r.randint(1, 3), 2, deterministic=det)
        b = random_automaton(r, lam, r.randint(1, 3), 2, deterministic=det)
        c, pairs = max_construction(a, b)
        spread = max(abs(a.max_weight - b.min_weight), abs(b.max_weight - a.min_weight))
        for s in pairs:
            assert min(s.gp, s.gq) == 0
            for g in (s.gp, s.gq):
                assert g == INF or g == 0 or g < 2 * spread
        assert c.deterministic and c.complete
        assert values(c) == pointwise(max, a, b)


class TestTable:
    def test_shape(self):
        assert len(CLOSURE_TABLE) == 18
        for cls in ("nondeterministic", "deterministic", "integral"):
            assert {op for (c, op) in CLOSURE_TABLE if c == cls} == set(OPS)
        assert all(CLOSURE_TABLE[("integral", op)] for op in OPS)

    @pytest.mark.parametrize("op", ["max", "sub", "neg"])
    def test_forbidden_on_nonintegral_nondeterministic(self, op):
        a = families.nondeterminizable(5, 2)
        operands = [a] if op == "neg" else [a, a]
        assert not supported(op, a)
        with pytest.raises(ClosureError, match="not supported"):
            compose(op, operands)

    def test_negative_scale_uses_neg_cell(self):
        a = families.nondeterminizable(5, 2)
        with pytest.raises(ClosureError):
            compose("scale", [a], F(-1))
        assert compose("scale", [a], F(2)).transitions

    def test_integral_all_ops(self):
        r = random.Random(12)
        a, b = random_automaton(r, 2, 2, 2), random_automaton(r, 2, 2, 2)
        want = {
            "min": pointwise(min, a, b),
            "max": pointwise(max, a, b),
            "add": pointwise(lambda x, y: x + y, a, b),
            "sub": pointwise(lambda x, y: x - y, a, b),
        }
        for op, table in want.items():
            assert values(compose(op, [a, b])) == table, op
        assert values(compose("neg", [a])) == pointwise(lambda x: -x, a)
        assert values(compose("scale", [a], F(-2))) == pointwise(lambda x: -2 * x, a)

    def test_arity_and_name(self):
        a = zero_automaton(AB, 2)
        with pytest.raises(ClosureError, match="operand"):
            compose("add", [a])
        with pytest.raises(ClosureError, match="unknown"):
            compose("mul", [a, a])
        with pytest.raises(ClosureError, match="scalar"):
            compose("scale", [a])
