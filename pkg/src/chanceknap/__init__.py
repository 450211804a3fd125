"""Evolutionary solvers for the knapsack problem with stochastic profits.

Maximizes the profit level that a solution is guaranteed to reach with
probability at least 1 - alpha, using tail-inequality-based discounted
fitness functions (Chebyshev/Cantelli and additive Hoeffding) optimized by
simple evolutionary algorithms.
"""

from .engines import (Algorithm, AlgorithmConfig, HAVE_COMPILED, MutationKind,
                      RunResult, run, run_mu_plus_one, run_one_plus_one)
from .fitness import (Bound, BoundPreference, FitnessConfig, FitnessValue,
                      Ordering, compare_lex, fitness, fitness_geq,
                      preferred_bound, profit_cheb, profit_hoef, violation)
from .instances import (Aggregates, CapacityRule, FixedCapacity,
                        FractionCapacity, Instance, InstanceKind,
                        InstanceParseError, ProfitKind, ProfitModel, Solution,
                        aggregates, benchmark_capacity, generate_instance,
                        load_instance, parse_instance, save_instance,
                        serialize_instance, uniform_profit_variance)
from .operators import (PowerLawSpec, discount_value,
                        discounted_greedy_uniform_crossover,
                        heavy_tail_mutation, sample_power_law,
                        standard_bit_mutation)
from .oracles import (ViolationEstimate, brute_force_best,
                      estimate_violation_probability,
                      random_feasible_solution, variance_crosscheck)
from .stats import chi2_sf, kruskal_wallis, pairwise_markers

__version__ = "0.1.0"

__all__ = [
    "Aggregates", "Algorithm", "AlgorithmConfig", "Bound", "BoundPreference",
    "CapacityRule", "FitnessConfig", "FitnessValue", "FixedCapacity",
    "FractionCapacity", "HAVE_COMPILED", "Instance", "InstanceKind",
    "InstanceParseError", "MutationKind", "Ordering", "PowerLawSpec",
    "ProfitKind", "ProfitModel", "RunResult", "Solution",
    "ViolationEstimate", "aggregates", "benchmark_capacity", "chi2_sf",
    "compare_lex", "discount_value", "discounted_greedy_uniform_crossover",
    "estimate_violation_probability", "fitness", "fitness_geq",
    "generate_instance", "heavy_tail_mutation", "kruskal_wallis",
    "load_instance", "pairwise_markers", "parse_instance", "preferred_bound",
    "profit_cheb", "profit_hoef", "random_feasible_solution", "run",
    "run_mu_plus_one", "run_one_plus_one", "sample_power_law",
    "save_instance", "serialize_instance", "standard_bit_mutation",
    "uniform_profit_variance", "variance_crosscheck", "violation",
    "brute_force_best", "__version__",
]
