import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lucekit import (
    ChoiceCorrespondence,
    ChoiceFamily,
    ChoiceSet,
    EXACT,
    FLOAT,
    LuceWeights,
    NotRationalError,
    Universe,
    WeakOrder,
    check_choice_axiom,
    check_full_support,
    correspondence_from_order,
    general_luce_rule,
    general_luce_rule_from_utility,
    lambda_smoothed_rule,
    limit_check,
    luce_rule,
    support_correspondence,
)

import helpers


class TestLuceWeights:
    def test_from_v_exact(self):
        u = Universe("ab")
        w = LuceWeights.from_v(u, {"a": Fraction(2), "b": Fraction(1, 2)})
        assert w.mode == EXACT
        assert w.alpha["a"] == pytest.approx(math.log(2))
        assert w.alpha["b"] == pytest.approx(-math.log(2))

    def test_from_alpha_float(self):
        u = Universe("ab")
        w = LuceWeights.from_alpha(u, {"a": 0.0, "b": math.log(3)})
        assert w.mode == FLOAT
        assert w.v["b"] == pytest.approx(3.0)

    def test_uniform(self):
        w = LuceWeights.uniform(Universe("abc"))
        assert all(v == 1 for v in w.v.values())
        assert w.mode == EXACT

    def test_validation(self):
        u = Universe("ab")
        with pytest.raises(ValueError):
            LuceWeights.from_v(u, {"a": Fraction(1)})
        with pytest.raises(ValueError):
            LuceWeights.from_v(u, {"a": Fraction(1), "b": Fraction(0)})
        with pytest.raises(ValueError):
            LuceWeights.from_v(u, {"a": Fraction(1), "b": Fraction(-1)})
        with pytest.raises(ValueError):
            LuceWeights.from_v(u, {"a": Fraction(1), "b": Fraction(1), "z": Fraction(1)})


class TestLuceRule:
    def test_shares_are_normalized_weights(self):
        u = Universe("abc")
        w = LuceWeights.from_v(u, {"a": Fraction(1), "b": Fraction(2), "c": Fraction(3)})
        rule = luce_rule(w, ChoiceFamily.of_all_subsets(u))
        abc = ChoiceSet("abc")
        assert rule.p("a", abc) == Fraction(1, 6)
        assert rule.p("b", abc) == Fraction(2, 6)
        assert rule.p("c", abc) == Fraction(3, 6)
        assert rule.p("b", ChoiceSet("bc")) == Fraction(2, 5)
        assert rule.mode == EXACT
        assert check_full_support(rule).holds

    def test_family_universe_mismatch(self):
        w = LuceWeights.uniform(Universe("ab"))
        with pytest.raises(ValueError):
            luce_rule(w, ChoiceFamily.of_all_subsets(Universe("abc")))


class TestGeneralLuceRule:
    def test_softmax_on_gamma_zero_off(self):
        u = Universe("abc")
        order = WeakOrder.from_classes(u, [["a", "b"], ["c"]])
        gamma = correspondence_from_order(order, ChoiceFamily.of_all_subsets(u))
        w = LuceWeights.from_v(u, {"a": Fraction(2), "b": Fraction(1), "c": Fraction(5)})
        rule = general_luce_rule(gamma, w)
        abc = ChoiceSet("abc")
        assert rule.p("a", abc) == Fraction(2, 3)
        assert rule.p("b", abc) == Fraction(1, 3)
        assert rule.p("c", abc) == 0
        # c's own weight only matters where c is chosen at all
        assert rule.p("c", ChoiceSet("c")) == 1
        assert support_correspondence(rule).gamma(abc) == ChoiceSet("ab")
        assert check_choice_axiom(rule).holds

    def test_refuses_non_warp_gamma(self):
        u = Universe("abc")
        fam = ChoiceFamily.of_all_subsets(u)
        table = {A: A for A in fam}
        table[ChoiceSet("ab")] = ChoiceSet("a")  # contradicts choosing all of abc
        gamma = ChoiceCorrespondence(fam, table)
        with pytest.raises(NotRationalError) as err:
            general_luce_rule(gamma, LuceWeights.uniform(u))
        assert err.value.report is not None
        assert not err.value.report.holds

    def test_from_utility_matches_order_form(self):
        rng = random.Random(3)
        u = helpers.universe_of(4)
        fam = ChoiceFamily.of_all_subsets(u)
        util = {"a": 1.0, "b": 1.0, "c": 0.0, "d": -2.0}
        w = helpers.random_rational_weights(u, rng)
        via_util = general_luce_rule_from_utility(util, w, fam)
        order = WeakOrder.from_utility(u, util)
        via_order = general_luce_rule(correspondence_from_order(order, fam), w)
        assert via_util.table == via_order.table

    @settings(max_examples=60, deadline=None)
    @given(
        n=st.integers(min_value=2, max_value=5),
        seed=st.integers(min_value=0, max_value=100_000),
    )
    def test_synthesized_rules_satisfy_factorization(self, n, seed):
        rng = random.Random(seed)
        rule = helpers.random_synthesized_rule(n, rng)
        assert check_choice_axiom(rule).holds


class TestSmoothedRule:
    def _setup(self):
        u = Universe("abc")
        util = {"a": 1.0, "b": 1.0, "c": 0.0}
        w = LuceWeights.from_alpha(u, {"a": math.log(2), "b": 0.0, "c": 0.0})
        fam = ChoiceFamily.of_all_subsets(u)
        return u, util, w, fam

    def test_rows_are_full_support_floats(self):
        _, util, w, fam = self._setup()
        rule = lambda_smoothed_rule(util, w, 0.5, fam)
        assert rule.mode == FLOAT
        abc = ChoiceSet("abc")
        assert all(rule.p(a, abc) > 0 for a in "abc")
        assert sum(rule.p(a, abc) for a in "abc") == pytest.approx(1.0)

    def test_limit_approaches_argmax_form(self):
        _, util, w, fam = self._setup()
        target = general_luce_rule_from_utility(util, w, fam).as_float()
        close = lambda_smoothed_rule(util, w, 0.02, fam)
        gap = max(abs(close.p(a, A) - target.p(a, A)) for A in fam for a in A)
        assert gap < 1e-9

    def test_tiny_lambda_does_not_overflow(self):
        _, util, w, fam = self._setup()
        rule = lambda_smoothed_rule(util, w, 1e-9, fam)
        assert rule.p("c", ChoiceSet("abc")) == 0.0
        assert rule.p("a", ChoiceSet("abc")) == pytest.approx(2 / 3)

    def test_rejects_bad_lambda(self):
        _, util, w, fam = self._setup()
        with pytest.raises(ValueError):
            lambda_smoothed_rule(util, w, 0.0, fam)
        with pytest.raises(ValueError):
            lambda_smoothed_rule(util, w, -1.0, fam)


class TestLimitCheck:
    def _setup(self):
        u = Universe("abc")
        util = {"a": 1.0, "b": 1.0, "c": 0.0}
        w = LuceWeights.from_alpha(u, {"a": math.log(2), "b": 0.0, "c": 0.0})
        return util, w, ChoiceFamily.of_all_subsets(u)

    def test_converges_on_standard_schedule(self):
        util, w, fam = self._setup()
        rep = limit_check(util, w, (1.0, 0.5, 0.1, 0.05), fam)
        assert rep.converged
        assert rep.final_distance <= 1e-6
        assert all(x > y for x, y in zip(rep.distances, rep.distances[1:]))

    def test_not_converged_when_lambda_large(self):
        util, w, fam = self._setup()
        rep = limit_check(util, w, (1.0, 0.9), fam)
        assert not rep.converged
        assert rep.final_distance > 1e-6

    def test_schedule_validation(self):
        util, w, fam = self._setup()
        with pytest.raises(ValueError):
            limit_check(util, w, (), fam)
        with pytest.raises(ValueError):
            limit_check(util, w, (0.5, 1.0), fam)
        with pytest.raises(ValueError):
            limit_check(util, w, (1.0, 1.0), fam)
        with pytest.raises(ValueError):
            limit_check(util, w, (1.0, -0.5), fam)

    def test_tail_monotone_property(self):
        util, w, fam = self._setup()
        rep = limit_check(util, w, (2.0, 1.0, 0.5, 0.25, 0.125), fam)
        assert rep.tail_monotone
