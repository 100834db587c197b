from fractions import Fraction as F

import pytest

from dsautomata import families
from dsautomata.analysis import gap_of
from dsautomata.core import cost_vector, gap, validate, word_value
from dsautomata.determinize import determinize_exact
from dsautomata.families import FAMILIES, FamilyError, FamilySpec, family_properties, generate
from family_sweep import SWEEP, label


def fast(sweep):
    return [case for case in sweep if not (case[0] == "last_by_k" and case[1]["k"] > 6)]


class TestGenerate:
    def test_weight_lb_shape(self):
        a = generate("weight_lb", **{"lambda": 2, "k": 5})
        assert len(a.states) == 3
        assert set(a.alphabet) == {"-5", "-1", "0", "1"}
        q2 = a.state_id("q2")
        assert all(t.weight == F(a.alphabet[t.symbol]) for t in a.transitions if t.dst == q2)

    def test_nondeterminizable_alphabet(self):
        a = generate("nondeterminizable", h=5, k=2)
        assert set(a.alphabet) == {"0", "-2", "-4", "-5", "2"}
        assert a.lam.value == F(5, 2)

    def test_combined_shape(self):
        a = generate("combined_lb", **{"lambda": 2, "k": 2, "l": 2})
        assert len(a.states) == 4
        assert len(a.alphabet) == 6**2
        assert families.tuple_letter([F(-4), F(1)]) in a.alphabet

    @pytest.mark.parametrize("name, params", SWEEP, ids=[label(*c) for c in SWEEP])
    def test_validates(self, name, params):
        out = generate(name, **params)
        for a in out if isinstance(out, tuple) else (out,):
            rep = validate(a)
            assert rep.lambda_ok
            assert rep.complete == (name != "incomplete_b")

    @pytest.mark.parametrize("name, params, match", [
        ("nondeterminizable", dict(h=4, k=2), "coprime"),
        ("nondeterminizable", dict(h=2, k=3), "coprime"),
        ("weight_lb", dict(k=2), "exceed"),
        ("weight_lb", {"k": 5, "lambda": F(5, 2)}, "integ"),
        ("statecount_lb", dict(k=2, n=3), "k"),
        ("last_by_k", dict(k=0), "k"),
        ("incomplete_b", {"lambda": 1}, "lambda"),
    ])
    def test_invalid(self, name, params, match):
        with pytest.raises(FamilyError, match=match):
            generate(name, **params)

    def test_every_family_in_sweep(self):
        assert {name for name, _ in SWEEP} == set(FAMILIES)

    def test_unknown_family(self):
        with pytest.raises(FamilyError):
            FamilySpec("nope", {})


class TestPinnedFacts:
    def test_weight_lb_words(self):
        a = families.weight_lb(2, 6)
        gaps = {x: gap(a, "q2", families.weight_lb_word(2, x)) for x in (3, 4, 5, 6)}
        assert gaps == {3: 6, 4: 8, 5: 10, 6: 12}

    def test_precision_l1(self):
        a = families.precision_lb()
        q2 = a.state_id("q2")
        words = [families.precision_lb_word(1, i) for i in range(3)]
        assert words == [("0",), ("1/3",), ("2/3",)]
        assert [gap_of(a, q2, u) for u in words] == [0, F(1, 2), 1]

    def test_incomplete_aa(self):
        assert gap(families.incomplete_b(2), "q2", ("a", "a")) == 7

    def test_greedy_gaps_distinct(self):
        _, gaps = families.greedy_gaps(5, 2, 100)
        assert len(set(gaps)) == 100

    def test_last_by_k_language(self):
        a = families.last_by_k(2)
        assert word_value(a, ("a", "b", "#")) < 0
        assert word_value(a, ("b", "a", "#")) == 0
        assert word_value(a, ("a", "b")) == 0

    def test_statecount_costs(self):
        a = families.statecount_lb(3, 3)
        u = families.statecount_lb_word((1, 0, 1))
        c = cost_vector(a, u)
        assert [c[a.state_id(f"q{i}")] > F(1, 3) for i in (1, 2, 3)] == [True, False, True]

    def test_nomax_gap(self):
        _, b = families.nomax_pair()
        for j, k in ((1, 3), (2, 3), (5, 4)):
            u = families.nomax_word(j, k)
            assert b.lam.value ** len(u) * word_value(b, u) == F(5 * j, 2**k)


class TestLowerBounds:
    @pytest.mark.parametrize("k", [4, 6, 8])
    def test_weight_lb_states(self, k):
        assert determinize_exact(families.weight_lb(2, k)).states_created >= k - 2

    def test_combined_states(self):
        assert determinize_exact(families.combined_lb(2, 2, 2)).states_created >= 4


@pytest.mark.parametrize("name, params", fast(SWEEP), ids=[label(*c) for c in fast(SWEEP)])
def test_properties_sweep(name, params):
    rep = family_properties(name, **params)
    assert rep.ok, str(rep)


@pytest.mark.slow
@pytest.mark.parametrize("k", [7, 8])
def test_last_by_k_large(k):
    rep = family_properties("last_by_k", k=k)
    assert rep.ok, str(rep)


def test_report_lists_failures():
    rep = families.PropertyReport("x")
    rep.add("good", True)
    rep.add("bad", False, "detail")
    assert not rep.ok and rep.failures() == [("bad", False, "detail")]
    assert "[FAIL] bad: detail" in str(rep)
