import numpy as np
import pytest

from chanceknap.fitness import Bound, FitnessConfig, fitness
from chanceknap.instances import (FixedCapacity, Instance, InstanceKind,
                                  ProfitModel, Solution, generate_instance)
from chanceknap.oracles import (brute_force_best,
                                estimate_violation_probability,
                                random_feasible_solution, variance_crosscheck)

from conftest import make_tiny_instance


def single_item_instance(mu=100.0, weight=1, delta=25.0):
    return Instance(name="one", n=1, capacity=10, mus=np.array([mu]),
                    weights=np.array([weight]),
                    profit_model=ProfitModel(delta=delta))


class TestViolationEstimator:
    def test_deterministic_profits_never_below(self):
        inst = make_tiny_instance(delta=0.0)
        x = Solution.from_string("011")  # mu = 14
        est = estimate_violation_probability(inst, x, 13.0, 10_000, seed=0)
        assert est.estimate == 0.0
        assert est.violations == 0

    def test_single_uniform_item_cdf(self):
        # profit uniform on [75, 125]; Pr(p < 80) = 5/50 = 0.1
        inst = single_item_instance()
        est = estimate_violation_probability(inst, Solution.from_string("1"),
                                             80.0, 1_000_000, seed=1)
        assert abs(est.estimate - 0.1) <= 3 * est.std_error
        assert est.std_error == pytest.approx(
            np.sqrt(est.estimate * (1 - est.estimate) / est.samples))

    def test_median_at_expected_profit(self):
        inst = make_tiny_instance(delta=3.0)
        x = Solution.from_string("101")  # mu = 16
        est = estimate_violation_probability(inst, x, 16.0, 1_000_000, seed=2)
        assert abs(est.estimate - 0.5) <= 3 * est.std_error

    def test_deterministic_per_seed(self):
        inst = make_tiny_instance(delta=3.0)
        x = Solution.from_string("110")
        a = estimate_violation_probability(inst, x, 17.0, 50_000, seed=9)
        b = estimate_violation_probability(inst, x, 17.0, 50_000, seed=9)
        c = estimate_violation_probability(inst, x, 17.0, 50_000, seed=10)
        assert a == b
        assert a.violations != c.violations

    def test_rejects_bad_samples(self):
        with pytest.raises(ValueError):
            estimate_violation_probability(make_tiny_instance(),
                                           Solution.zeros(3), 1.0, 0, seed=0)


class TestBruteForce:
    def test_deterministic_tiny_optimum(self):
        inst = make_tiny_instance(delta=0.0)
        cfg = FitnessConfig(bound=Bound.CHEBYSHEV, alpha=0.1, delta=0.0)
        best, value = brute_force_best(inst, cfg)
        assert best.to_string() == "011"
        assert value.violation == 0.0
        assert value.profit == 14.0

    def test_unconstrained_takes_everything(self):
        inst = make_tiny_instance(delta=0.0, capacity=100)
        cfg = FitnessConfig(bound=Bound.HOEFFDING, alpha=0.1, delta=0.0)
        best, value = brute_force_best(inst, cfg)
        assert best.to_string() == "111"
        assert value.profit == 24.0

    def test_uncertain_tiny_optimum(self):
        # full 8-case enumeration: feasible best is 011 with
        # 14 - 3 sqrt(4 ln 10) = 4.895437223689122...
        inst = make_tiny_instance(delta=3.0)
        cfg = FitnessConfig(bound=Bound.HOEFFDING, alpha=0.1, delta=3.0)
        best, value = brute_force_best(inst, cfg)
        assert best.to_string() == "011"
        assert value.violation == 0.0
        assert value.profit == pytest.approx(4.895437223689122, abs=1e-12)

    def test_matches_public_fitness_on_random_instances(self):
        rng = np.random.default_rng(4)
        for trial in range(10):
            n = int(rng.integers(2, 10))
            inst = Instance(name="r", n=n, capacity=int(rng.integers(0, 60)),
                            mus=rng.integers(0, 40, n).astype(float),
                            weights=rng.integers(1, 20, n),
                            profit_model=ProfitModel(delta=3.0))
            cfg = FitnessConfig(bound=Bound.HOEFFDING if trial % 2 else
                                Bound.CHEBYSHEV, alpha=0.1, delta=3.0)
            best, value = brute_force_best(inst, cfg)
            direct = fitness(inst, best, cfg)
            assert direct.violation == value.violation
            assert direct.profit == value.profit
            # no other solution beats it
            for mask in range(2 ** n):
                bits = np.array([(mask >> i) & 1 for i in range(n)],
                                dtype=np.uint8)
                other = fitness(inst, Solution(bits), cfg)
                assert (other.violation, -other.profit) >= \
                    (value.violation, -value.profit)

    def test_size_guard(self):
        inst = generate_instance(InstanceKind.UNCORRELATED, 25, 100,
                                 FixedCapacity(100), seed=0)
        with pytest.raises(ValueError):
            brute_force_best(inst, FitnessConfig(Bound.CHEBYSHEV, 0.1, 0.0))


class TestVarianceCrosscheck:
    def test_empty_solution(self):
        inst = make_tiny_instance(delta=25.0)
        assert variance_crosscheck(inst, Solution.zeros(3), 100, 0) == (0.0, 0.0)

    def test_no_noise(self):
        inst = make_tiny_instance(delta=0.0)
        x = Solution.from_string("111")
        assert variance_crosscheck(inst, x, 100, 0) == (0.0, 0.0)

    def test_three_items_delta_25(self):
        inst = make_tiny_instance(delta=25.0)
        x = Solution.from_string("111")
        analytic, empirical = variance_crosscheck(inst, x, 1_000_000, seed=3)
        assert analytic == 3 * 25 * 25 / 3  # == 625
        assert abs(empirical - analytic) / analytic < 0.05


class TestRandomFeasible:
    def test_always_feasible_and_nonempty(self):
        inst = generate_instance(InstanceKind.UNCORRELATED, 100, 10_000,
                                 FixedCapacity(2407), seed=1)
        rng = np.random.default_rng(0)
        for _ in range(50):
            x = random_feasible_solution(inst, rng)
            assert int(inst.weights @ x.bits) <= inst.capacity
            assert x.ones >= 1

    def test_maximal(self):
        inst = make_tiny_instance(capacity=100)
        x = random_feasible_solution(inst, np.random.default_rng(0))
        assert x.to_string() == "111"
