"""Independent verification machinery.

Nothing here shares code with the optimization path: the Monte Carlo
estimator samples the profit distribution directly, and the exhaustive
search enumerates every bit vector.  Both exist so that the discounted
fitness functions and the engines can be checked against ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fitness import Bound, FitnessConfig, FitnessValue, profit_cheb, profit_hoef
from .instances import Instance, Solution, uniform_profit_variance

_BRUTE_FORCE_MAX_N = 24
_MC_CHUNK = 65_536


@dataclass(frozen=True)
class ViolationEstimate:
    """Monte Carlo estimate of Pr(realized profit < p_hat_level)."""

    p_hat_level: float
    samples: int
    violations: int
    estimate: float
    std_error: float


def estimate_violation_probability(instance: Instance, x: Solution,
                                   level: float, samples: int,
                                   seed: int) -> ViolationEstimate:
    """Sample realized profits of ``x`` and count how often the total drops
    strictly below ``level``.

    Each selected item's profit is drawn uniformly from
    [mu_i - delta, mu_i + delta], independently; draws are continuous, which
    is the model under which the variance formula delta^2/3 is exact.
    Deterministic per seed.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    bits = x.bits
    if len(bits) != instance.n:
        raise ValueError(f"solution length {len(bits)} != instance n {instance.n}")
    delta = instance.profit_model.delta
    selected = np.nonzero(bits)[0]
    mu_sel = instance.mus[selected]
    rng = np.random.default_rng(seed)
    violations = 0
    if len(selected) == 0 or delta == 0.0:
        total = float(mu_sel.sum())
        violations = samples if total < level else 0
    else:
        low = mu_sel - delta
        high = mu_sel + delta
        remaining = samples
        while remaining > 0:
            chunk = min(_MC_CHUNK, remaining)
            draws = rng.uniform(low, high, size=(chunk, len(selected)))
            violations += int(np.count_nonzero(draws.sum(axis=1) < level))
            remaining -= chunk
    estimate = violations / samples
    std_error = math.sqrt(estimate * (1.0 - estimate) / samples)
    return ViolationEstimate(p_hat_level=float(level), samples=samples,
                             violations=violations, estimate=estimate,
                             std_error=std_error)


def _subset_sums(values: np.ndarray) -> np.ndarray:
    """sums[mask] = sum of values[i] over set bits of mask (item i = bit i),
    built by doubling."""
    sums = np.zeros(1, dtype=values.dtype)
    for v in values:
        sums = np.concatenate([sums, sums + v])
    return sums


def _bit_reversed(mask: int, n: int) -> int:
    """Value of the solution bitstring read as a binary numeral with item 1
    as the most significant digit."""
    value = 0
    for i in range(n):
        value = (value << 1) | ((mask >> i) & 1)
    return value


def brute_force_best(instance: Instance,
                     cfg: FitnessConfig) -> tuple[Solution, FitnessValue]:
    """Enumerate all 2^n solutions and return the lexicographic-fitness
    maximum; ties break toward the lower bitstring-as-binary value.

    Guarded to n <= 24 (the doubling tables take O(2^n) memory).
    """
    n = instance.n
    if n > _BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {_BRUTE_FORCE_MAX_N}, "
                         f"got {n}")
    weights = _subset_sums(instance.weights)
    mus = _subset_sums(instance.mus)
    ones = _subset_sums(np.ones(n, dtype=np.int64))
    over = weights - instance.capacity
    violation = np.where(over > 0, over.astype(np.float64), 0.0)
    if cfg.bound is Bound.CHEBYSHEV:
        variance = ones * (cfg.delta * cfg.delta) / 3.0
        profit = mus - np.sqrt((1.0 - cfg.alpha) / cfg.alpha * variance)
    else:
        profit = mus - cfg.delta * np.sqrt(
            math.log(1.0 / cfg.alpha) * 2.0 * ones)
    min_violation = violation.min()
    candidates = np.nonzero(violation == min_violation)[0]
    best_profit = profit[candidates].max()
    candidates = candidates[profit[candidates] == best_profit]
    best_mask = min((int(c) for c in candidates),
                    key=lambda m: _bit_reversed(m, n))
    bits = np.array([(best_mask >> i) & 1 for i in range(n)], dtype=np.uint8)
    return (Solution(bits),
            FitnessValue(violation=float(min_violation),
                         profit=float(best_profit)))


def variance_crosscheck(instance: Instance, x: Solution, samples: int,
                        seed: int) -> tuple[float, float]:
    """(analytic, empirical) profit variance of ``x``: the closed form
    ones * delta^2 / 3 against the sample variance of Monte Carlo draws."""
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    bits = x.bits
    if len(bits) != instance.n:
        raise ValueError(f"solution length {len(bits)} != instance n {instance.n}")
    delta = instance.profit_model.delta
    selected = np.nonzero(bits)[0]
    analytic = uniform_profit_variance(len(selected), delta)
    if len(selected) == 0 or delta == 0.0:
        return analytic, 0.0
    mu_sel = instance.mus[selected]
    rng = np.random.default_rng(seed)
    totals = np.empty(samples, dtype=np.float64)
    filled = 0
    while filled < samples:
        chunk = min(_MC_CHUNK, samples - filled)
        draws = rng.uniform(mu_sel - delta, mu_sel + delta,
                            size=(chunk, len(selected)))
        totals[filled:filled + chunk] = draws.sum(axis=1)
        filled += chunk
    empirical = float(np.var(totals, ddof=1))
    return analytic, empirical


def random_feasible_solution(instance: Instance, rng) -> Solution:
    """Random maximal feasible solution: visit items in random order, add
    each one that still fits.  Always selects at least one item when any
    single item fits the capacity."""
    order = rng.permutation(instance.n)
    bits = np.zeros(instance.n, dtype=np.uint8)
    weight = 0
    for item in order:
        w = int(instance.weights[item])
        if weight + w <= instance.capacity:
            bits[item] = 1
            weight += w
    return Solution(bits)


def guaranteed_profit(instance: Instance, x: Solution,
                      cfg: FitnessConfig) -> float:
    """Discounted profit of ``x`` under ``cfg`` (violation ignored)."""
    bits = x.bits
    mu = float(instance.mus @ bits)
    ones = int(bits.sum())
    if cfg.bound is Bound.CHEBYSHEV:
        return profit_cheb(mu, uniform_profit_variance(ones, cfg.delta),
                           cfg.alpha)
    return profit_hoef(mu, cfg.delta, ones, cfg.alpha)
