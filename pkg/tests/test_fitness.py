import math
from decimal import Decimal, getcontext

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from chanceknap.fitness import (Bound, BoundPreference, FitnessConfig,
                                FitnessValue, Ordering, compare_lex, fitness,
                                fitness_geq, preferred_bound, profit_cheb,
                                profit_hoef, violation)
from chanceknap.instances import Solution, aggregates

from conftest import make_tiny_instance as tiny_instance

getcontext().prec = 50


def cheb_oracle(mu, var, alpha):
    """Independent high-precision evaluation of the Chebyshev closed form."""
    a = Decimal(str(alpha))
    return float(Decimal(mu) - ((1 - a) / a * Decimal(var)).sqrt())


def hoef_oracle(mu, delta, ones, alpha):
    """Independent high-precision evaluation of the Hoeffding closed form."""
    a = Decimal(str(alpha))
    inner = (1 / a).ln() * 2 * ones
    return float(Decimal(mu) - Decimal(delta) * inner.sqrt())


class TestViolation:
    def test_boundary_feasible(self):
        inst = tiny_instance()  # B = 7
        agg = aggregates(inst, Solution.from_string("011"))  # w = 7
        assert violation(inst, agg) == 0.0

    def test_overweight(self):
        inst = tiny_instance()
        agg = aggregates(inst, Solution.from_string("111"))  # w = 12 = B + 5
        assert violation(inst, agg) == 5.0

    def test_empty_knapsack(self):
        inst = tiny_instance().with_delta(0.0)
        zero_cap = type(inst)(name="z", n=3, capacity=0, mus=inst.mus,
                              weights=inst.weights,
                              profit_model=inst.profit_model)
        agg = aggregates(zero_cap, Solution.zeros(3))
        assert violation(zero_cap, agg) == 0.0


class TestProfitCheb:
    def test_zero_variance_no_discount(self):
        assert profit_cheb(50.0, 0.0, 0.01) == 50.0

    def test_hand_value(self):
        # 100 - 3 * sqrt(300) = 48.038475772933681...
        value = profit_cheb(100.0, 300.0, 0.1)
        assert value == pytest.approx(48.03847577293368, abs=1e-12)
        assert value == pytest.approx(cheb_oracle(100, 300, 0.1), abs=1e-12)

    def test_even_odds(self):
        # (1 - 0.5)/0.5 = 1, sqrt(4) = 2
        assert profit_cheb(10.0, 4.0, 0.5) == 8.0

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.3, 2.0])
    def test_alpha_domain(self, alpha):
        with pytest.raises(ValueError):
            profit_cheb(1.0, 1.0, alpha)

    def test_negative_variance(self):
        with pytest.raises(ValueError):
            profit_cheb(1.0, -1.0, 0.1)


class TestProfitHoef:
    def test_empty_solution(self):
        assert profit_hoef(0.0, 25.0, 0, 0.1) == 0.0

    def test_hand_value_single_item(self):
        # 100 - 25 * sqrt(2 ln 10) = 46.350849342766319...
        value = profit_hoef(100.0, 25.0, 1, 0.1)
        assert value == pytest.approx(46.35084934276632, abs=1e-12)
        assert value == pytest.approx(hoef_oracle(100, 25, 1, 0.1), abs=1e-12)

    def test_can_go_negative(self):
        # 100 - 25 * sqrt(8 ln 100) = -51.742712938514635...
        value = profit_hoef(100.0, 25.0, 4, 0.01)
        assert value == pytest.approx(-51.742712938514635, abs=1e-12)
        assert value == pytest.approx(hoef_oracle(100, 25, 4, 0.01), abs=1e-12)
        assert value < 0

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.3, 2.0])
    def test_alpha_domain(self, alpha):
        with pytest.raises(ValueError):
            profit_hoef(1.0, 1.0, 1, alpha)


class TestFitness:
    def test_deterministic_profits_both_bounds(self):
        inst = tiny_instance()
        x = Solution.from_string("011")
        for bound in Bound:
            cfg = FitnessConfig(bound=bound, alpha=0.25, delta=0.0)
            value = fitness(inst, x, cfg)
            assert value.violation == 0.0
            assert value.profit == 14.0

    def test_chebyshev_hand_example(self):
        inst = tiny_instance(delta=3.0)
        cfg = FitnessConfig(bound=Bound.CHEBYSHEV, alpha=0.5, delta=3.0)
        value = fitness(inst, Solution.from_string("011"), cfg)
        assert value.violation == 0.0
        # 14 - sqrt(6) = 11.550510257216822...
        assert value.profit == pytest.approx(11.550510257216822, abs=1e-12)

    def test_violation_branch(self):
        inst = tiny_instance(delta=3.0)
        cfg = FitnessConfig(bound=Bound.CHEBYSHEV, alpha=0.5, delta=3.0)
        value = fitness(inst, Solution.from_string("111"), cfg)
        assert value.violation == 5.0

    def test_config_delta_overrides_instance_delta(self):
        inst = tiny_instance(delta=3.0)
        cfg = FitnessConfig(bound=Bound.HOEFFDING, alpha=0.1, delta=0.0)
        value = fitness(inst, Solution.from_string("011"), cfg)
        assert value.profit == 14.0


class TestCompareLex:
    def test_feasibility_dominates(self):
        a = FitnessValue(0.0, 5.0)
        b = FitnessValue(3.0, 100.0)
        assert compare_lex(a, b) is Ordering.A_BETTER

    def test_equal(self):
        a = FitnessValue(0.0, 5.0)
        assert compare_lex(a, FitnessValue(0.0, 5.0)) is Ordering.EQUAL

    def test_profit_breaks_tie(self):
        a = FitnessValue(2.0, 1.0)
        b = FitnessValue(2.0, 3.0)
        assert compare_lex(a, b) is Ordering.B_BETTER
        assert fitness_geq(b, a)
        assert not fitness_geq(a, b)

    fitness_values = st.builds(
        FitnessValue,
        violation=st.sampled_from([0.0, 1.0, 2.0, 5.0]),
        profit=st.sampled_from([-3.0, 0.0, 1.0, 7.5]))

    @given(fitness_values, fitness_values, fitness_values)
    def test_total_preorder(self, a, b, c):
        # geq is total, reflexive, transitive; equality is antisymmetric
        assert fitness_geq(a, a)
        assert fitness_geq(a, b) or fitness_geq(b, a)
        if fitness_geq(a, b) and fitness_geq(b, c):
            assert fitness_geq(a, c)
        if fitness_geq(a, b) and fitness_geq(b, a):
            assert compare_lex(a, b) is Ordering.EQUAL


class TestPreferredBound:
    def test_known_regimes(self):
        assert preferred_bound(0.1) is BoundPreference.CHEBYSHEV
        assert preferred_bound(0.01) is BoundPreference.HOEFFDING
        assert preferred_bound(0.001) is BoundPreference.HOEFFDING
        # g(0.05) ~ 0.1577 < 1/6 < g(0.06) ~ 0.1796
        assert preferred_bound(0.05) is BoundPreference.HOEFFDING
        assert preferred_bound(0.06) is BoundPreference.CHEBYSHEV

    def test_domain(self):
        for alpha in (0.0, 1.0, -1.0, 2.0):
            with pytest.raises(ValueError):
                preferred_bound(alpha)


class TestMonotonicity:
    @settings(max_examples=100, deadline=None)
    @given(mu=st.floats(0, 1000), var=st.floats(0.1, 1e6),
           a1=st.floats(0.001, 0.98), a2=st.floats(0.001, 0.98))
    def test_cheb_increasing_in_alpha(self, mu, var, a1, a2):
        assume(abs(a1 - a2) > 1e-6)
        lo, hi = min(a1, a2), max(a1, a2)
        assert profit_cheb(mu, var, lo) < profit_cheb(mu, var, hi)

    @settings(max_examples=100, deadline=None)
    @given(mu=st.floats(0, 1000), delta=st.floats(0.1, 100),
           ones=st.integers(1, 500),
           a1=st.floats(0.001, 0.98), a2=st.floats(0.001, 0.98))
    def test_hoef_increasing_in_alpha(self, mu, delta, ones, a1, a2):
        assume(abs(a1 - a2) > 1e-6)
        lo, hi = min(a1, a2), max(a1, a2)
        assert profit_hoef(mu, delta, ones, lo) < profit_hoef(mu, delta, ones, hi)

    @settings(max_examples=100, deadline=None)
    @given(mu=st.floats(0, 1000), alpha=st.floats(0.001, 0.99),
           v1=st.floats(0, 1e6), v2=st.floats(0, 1e6))
    def test_cheb_decreasing_in_variance(self, mu, alpha, v1, v2):
        assume(abs(v1 - v2) > 1e-6)
        lo, hi = min(v1, v2), max(v1, v2)
        assert profit_cheb(mu, hi, alpha) < profit_cheb(mu, lo, alpha)

    @settings(max_examples=100, deadline=None)
    @given(mu=st.floats(0, 1000), alpha=st.floats(0.001, 0.99),
           delta=st.floats(0.1, 100), o1=st.integers(0, 500),
           o2=st.integers(0, 500))
    def test_hoef_decreasing_in_ones(self, mu, alpha, delta, o1, o2):
        assume(o1 != o2)
        lo, hi = min(o1, o2), max(o1, o2)
        assert profit_hoef(mu, delta, hi, alpha) < profit_hoef(mu, delta, lo,
                                                               alpha)

    @settings(max_examples=100, deadline=None)
    @given(mu=st.floats(0, 1000), alpha=st.floats(0.001, 0.99),
           ones=st.integers(1, 500),
           d1=st.floats(0.1, 100), d2=st.floats(0.1, 100))
    def test_hoef_decreasing_in_delta(self, mu, alpha, ones, d1, d2):
        assume(abs(d1 - d2) > 1e-6)
        lo, hi = min(d1, d2), max(d1, d2)
        assert profit_hoef(mu, hi, ones, alpha) < profit_hoef(mu, lo, ones,
                                                              alpha)


class TestBoundConsistency:
    """The sign of hoef - cheb on uniform-independent variance must match
    the alpha-only threshold rule."""

    @settings(max_examples=200, deadline=None)
    @given(mu=st.floats(0, 10_000), delta=st.floats(0.5, 100),
           ones=st.integers(1, 500), alpha=st.floats(0.001, 0.99))
    def test_sign_matches_preference(self, mu, delta, ones, alpha):
        g = math.log(1.0 / alpha) * alpha / (1.0 - alpha)
        assume(abs(g - 1.0 / 6.0) > 1e-9)
        variance = ones * delta * delta / 3.0
        hoef = profit_hoef(mu, delta, ones, alpha)
        cheb = profit_cheb(mu, variance, alpha)
        if preferred_bound(alpha) is BoundPreference.HOEFFDING:
            assert hoef > cheb
        else:
            assert hoef < cheb

    def test_equal_when_no_uncertainty(self):
        assert profit_hoef(10.0, 0.0, 5, 0.1) == profit_cheb(10.0, 0.0, 0.1)
        assert profit_hoef(10.0, 25.0, 0, 0.1) == profit_cheb(10.0, 0.0, 0.1)
