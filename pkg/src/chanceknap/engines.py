"""Evolutionary engines under a fixed budget of fitness evaluations.

Three algorithms:

* ``1p1``    -- (1+1) EA with standard bit mutation (flip prob 1/n)
* ``1p1-ht`` -- (1+1) EA with heavy-tailed mutation (power-law flip count)
* ``mu1``    -- steady-state (mu+1) EA with the discounted greedy uniform
                crossover plus heavy-tailed mutation

Each run derives four named substreams (init, parent selection, crossover
coin, mutation) from its seed, so trajectories are reproducible and adding
instrumentation never perturbs them.  The hot loop runs in the compiled
``_speedups`` extension when it is importable, otherwise in the pure NumPy
fallback; both consume the substreams identically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import _py_kernels
from .fitness import Bound, FitnessConfig, FitnessValue
from .instances import Instance, Solution
from .operators import PowerLawSpec

try:
    from . import _speedups
except ImportError:  # extension not built; fall back to NumPy loops
    _speedups = None

HAVE_COMPILED = _speedups is not None

_EMPTY_CDF = np.zeros(1, dtype=np.float64)


class Algorithm(enum.Enum):
    ONE_PLUS_ONE = "1p1"
    ONE_PLUS_ONE_HT = "1p1-ht"
    MU_PLUS_ONE = "mu1"


class MutationKind(enum.Enum):
    STANDARD = "standard"
    HEAVY_TAIL = "heavy-tail"


@dataclass(frozen=True)
class AlgorithmConfig:
    algorithm: Algorithm
    budget: int
    seed: int = 0
    mu: int = 10
    crossover_prob: float = 0.8
    beta: float = 1.5

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError(f"crossover_prob must be in [0, 1], "
                             f"got {self.crossover_prob}")
        if self.beta <= 1:
            raise ValueError(f"beta must be > 1, got {self.beta}")
        if self.algorithm is Algorithm.MU_PLUS_ONE:
            if self.mu < 2:
                raise ValueError(f"mu must be >= 2, got {self.mu}")
            if self.budget < self.mu:
                raise ValueError(f"budget {self.budget} below population "
                                 f"size {self.mu}")


@dataclass(frozen=True)
class RunResult:
    best_solution: Solution
    best_fitness: FitnessValue
    evaluations_used: int
    seed: int
    trajectory: Tuple[Tuple[int, float], ...]


def _select_kernel(kernel: str):
    if kernel == "auto":
        return _speedups if _speedups is not None else _py_kernels
    if kernel == "compiled":
        if _speedups is None:
            raise RuntimeError("compiled kernels are not available; "
                               "build the _speedups extension")
        return _speedups
    if kernel == "python":
        return _py_kernels
    raise ValueError(f"kernel must be auto/compiled/python, got {kernel!r}")


def _streams(seed: int):
    children = np.random.SeedSequence(seed).spawn(4)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def _pack(raw, seed: int) -> RunResult:
    bits, violation, profit, evals, traj_e, traj_p = raw
    trajectory = tuple((int(e), float(p)) for e, p in zip(traj_e, traj_p))
    return RunResult(best_solution=Solution(np.asarray(bits, dtype=np.uint8)),
                     best_fitness=FitnessValue(violation=float(violation),
                                               profit=float(profit)),
                     evaluations_used=int(evals), seed=seed,
                     trajectory=trajectory)


def run_one_plus_one(instance: Instance, fit: FitnessConfig,
                     alg: AlgorithmConfig,
                     mutation: MutationKind = MutationKind.STANDARD,
                     kernel: str = "auto",
                     trajectory_stride: int = 1000) -> RunResult:
    """(1+1) EA: uniform random start, mutate + evaluate once per iteration,
    accept the offspring when its fitness is at least the parent's."""
    if trajectory_stride < 1:
        raise ValueError("trajectory_stride must be >= 1")
    heavy = mutation is MutationKind.HEAVY_TAIL
    if heavy:
        power_cdf = PowerLawSpec.for_length(instance.n, alg.beta).cdf
    else:
        power_cdf = _EMPTY_CDF
    mod = _select_kernel(kernel)
    init_gen, _sel, _coin, mut_gen = _streams(alg.seed)
    raw = mod.one_plus_one(instance.weights, instance.mus,
                           int(instance.capacity), float(fit.delta),
                           float(fit.alpha), fit.bound is Bound.CHEBYSHEV,
                           int(alg.budget), int(trajectory_stride),
                           heavy, power_cdf, init_gen, mut_gen)
    return _pack(raw, alg.seed)


def run_mu_plus_one(instance: Instance, fit: FitnessConfig,
                    alg: AlgorithmConfig, kernel: str = "auto",
                    trajectory_stride: int = 1000) -> RunResult:
    """(mu+1) EA with discounted greedy uniform crossover (probability
    ``crossover_prob``) and heavy-tailed mutation."""
    if trajectory_stride < 1:
        raise ValueError("trajectory_stride must be >= 1")
    if alg.mu < 2:
        raise ValueError(f"mu must be >= 2, got {alg.mu}")
    if alg.budget < alg.mu:
        raise ValueError(f"budget {alg.budget} below population size {alg.mu}")
    power_cdf = PowerLawSpec.for_length(instance.n, alg.beta).cdf
    mod = _select_kernel(kernel)
    init_gen, sel_gen, coin_gen, mut_gen = _streams(alg.seed)
    raw = mod.mu_plus_one(instance.weights, instance.mus,
                          int(instance.capacity), float(fit.delta),
                          float(fit.alpha), fit.bound is Bound.CHEBYSHEV,
                          int(alg.budget), int(trajectory_stride),
                          int(alg.mu), float(alg.crossover_prob), power_cdf,
                          init_gen, sel_gen, coin_gen, mut_gen)
    return _pack(raw, alg.seed)


def run(instance: Instance, fit: FitnessConfig, alg: AlgorithmConfig,
        kernel: str = "auto", trajectory_stride: int = 1000) -> RunResult:
    """Dispatch on ``alg.algorithm``."""
    if alg.algorithm is Algorithm.ONE_PLUS_ONE:
        return run_one_plus_one(instance, fit, alg, MutationKind.STANDARD,
                                kernel, trajectory_stride)
    if alg.algorithm is Algorithm.ONE_PLUS_ONE_HT:
        return run_one_plus_one(instance, fit, alg, MutationKind.HEAVY_TAIL,
                                kernel, trajectory_stride)
    if alg.algorithm is Algorithm.MU_PLUS_ONE:
        return run_mu_plus_one(instance, fit, alg, kernel, trajectory_stride)
    raise ValueError(f"unknown algorithm: {alg.algorithm!r}")
