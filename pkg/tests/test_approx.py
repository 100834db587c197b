import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import automata, single_state, words
from dsautomata import families
from dsautomata.approx import (
    DyadicDiscount,
    NotDyadicError,
    Precision,
    approx_determinize_rounding,
    approximate,
    min_unfold_depth,
    min_unfold_depth_generic,
    round_to_grid,
    rounding_state_bound,
    unfold,
    unfold_error_bound,
)
from dsautomata.core import DSAError, all_word_values, zero_automaton
from dsautomata.determinize import determinize_exact
from dsautomata.randomgen import random_automaton


def spread(m, lam):
    """Single state, two letters weighted 0 and m."""
    return single_state({"a": 0, "b": m}, lam)


class TestTypes:
    def test_precision(self):
        assert Precision(5).epsilon == F(1, 32)
        with pytest.raises(DSAError):
            Precision(0)

    def test_dyadic(self):
        d = DyadicDiscount(3)
        assert (d.K, d.lam) == (8, F(9, 8))
        assert DyadicDiscount.of(F(5, 4)).k == 2
        for bad in (F(2), F(5, 2), F(7, 6)):
            with pytest.raises(NotDyadicError):
                DyadicDiscount.of(bad)


class TestUnfold:
    def test_depth_zero(self):
        a = random_automaton(random.Random(1), 2, 3, 2)
        d = unfold(a, 0)
        mid = (a.min_weight + a.max_weight) / 2
        assert len(d.states) == 1 and all(t.weight == mid for t in d.transitions)

    def test_symmetric_weights_zero_loops(self):
        a = single_state({"a": -1, "b": 0, "c": 1}, 2)
        d = unfold(a, 2)
        leaves = [t for t in d.transitions if t.src == t.dst]
        assert leaves and all(t.weight == 0 for t in leaves)

    def test_state_count(self):
        d = unfold(random_automaton(random.Random(3), 2, 2, 3), 3)
        assert len(d.states) == 1 + 3 + 9 + 27
        assert d.deterministic and d.complete

    def test_guard(self):
        with pytest.raises(DSAError, match="limit"):
            unfold(random_automaton(random.Random(3), 2, 2, 3), 20)

    def test_negative_depth(self):
        with pytest.raises(DSAError):
            unfold(spread(1, 2), -1)

    @settings(max_examples=100, deadline=None)
    @given(automata(lams=(2, 3, F(3, 2), F(5, 4))), st.integers(0, 3))
    def test_window_and_tail(self, a, l):
        d = unfold(a, l)
        bound = unfold_error_bound(a, l)
        da, aa = all_word_values(d, l + 3), all_word_values(a, l + 3)
        for w, v in aa.items():
            if len(w) <= l:
                assert da[w] == v
            else:
                assert abs(da[w] - v) <= bound


class TestDepth:
    def test_error_bound_values(self):
        assert unfold_error_bound(spread(0, 2), 3) == 0
        assert unfold_error_bound(spread(1, 2), 1) == F(1, 2)
        assert unfold_error_bound(spread(1, F(3, 2)), 3) == F(4, 9)

    def test_min_depth_frozen(self):
        assert min_unfold_depth(spread(1, F(3, 2)), Precision(1)) == 3
        assert min_unfold_depth(spread(0, F(3, 2)), Precision(1)) == 0
        assert min_unfold_depth(spread(1, F(5, 4)), Precision(2)) == 11

    def test_min_depth_needs_dyadic(self):
        with pytest.raises(NotDyadicError):
            min_unfold_depth(spread(1, 2), Precision(2))
        assert min_unfold_depth_generic(spread(1, 2), F(1, 4)) == 2

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 6), st.integers(1, 8), st.fractions(min_value=F(1, 3), max_value=20, max_denominator=6))
    def test_minimality(self, k, p, m):
        a = spread(m, DyadicDiscount(k).lam)
        l = min_unfold_depth(a, Precision(p))
        eps = F(1, 2**p)
        assert unfold_error_bound(a, l) <= eps
        if l >= 1:
            assert unfold_error_bound(a, l - 1) > eps


class TestRound:
    def test_examples(self):
        assert round_to_grid(0, 3, 2) == 0
        assert round_to_grid(F(3, 10), 1, 1) == F(1, 2)
        assert round_to_grid(F(1, 4), 1, 1) == 0
        assert round_to_grid(F(3, 4), 1, 1) == F(1, 2)

    @given(st.fractions(min_value=0, max_value=50), st.integers(1, 6), st.integers(1, 4))
    def test_nearest(self, x, p, k):
        r = round_to_grid(x, p, k)
        step = F(1, 2 ** (p + k - 1))
        assert (r / step).denominator == 1
        assert abs(r - x) <= step / 2


class TestRoundingConstruction:
    def test_rejects_integral(self):
        with pytest.raises(NotDyadicError):
            approx_determinize_rounding(spread(1, 2), Precision(2))

    def test_zero_automaton(self):
        res = approx_determinize_rounding(zero_automaton(["a", "b"], F(3, 2)), Precision(3))
        assert res.states_created == 1 and all(t.weight == 0 for t in res.automaton.transitions)

    def test_precision_family(self):
        a = families.precision_lb()
        d = approx_determinize_rounding(a, Precision(4)).automaton
        eps = F(1, 16)
        da, aa = all_word_values(d, 5), all_word_values(a, 5)
        assert all(abs(da[w] - aa[w]) <= eps for w in aa)

    @settings(max_examples=80, deadline=None)
    @given(automata(lams=(F(3, 2), F(5, 4), F(9, 8))), st.integers(1, 6))
    def test_error_and_grid(self, a, p):
        res = approx_determinize_rounding(a, Precision(p), cap=50_000)
        k = DyadicDiscount.of(a.lam).k
        m = a.max_weight_difference
        step = F(1, 2 ** (p + k - 1))
        for gv in res.state_map.values():
            for g in gv.finite():
                i = g / step
                assert i.denominator == 1 and i <= m * 2 ** (p + 2 * k)
        da, aa = all_word_values(res.automaton, 5), all_word_values(a, 5)
        assert all(abs(da[w] - aa[w]) <= F(1, 2**p) for w in aa)
        assert res.states_created <= rounding_state_bound(a, Precision(p))

    def test_approximate_dispatch(self):
        a = random_automaton(random.Random(4), 2, 3, 2)
        assert approximate(a, F(1, 8)).automaton == determinize_exact(a).automaton
        b = random_automaton(random.Random(4), F(3, 2), 3, 2)
        assert approximate(b, F(1, 8)).stats["resolution"] == F(1, 2**3)
        with pytest.raises(DSAError):
            approximate(b, F(1, 3))
