"""Variation operators: bit mutations and the greedy repair crossover.

All operators take an explicit ``numpy.random.Generator`` and never modify
their inputs.  Bounded integers are derived from raw uniform draws
(``int(u * k)``) instead of ``Generator.integers`` so that the compiled and
pure-Python engine kernels consume identical stream positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .fitness import FitnessConfig, _check_alpha
from .instances import Instance, Solution


@lru_cache(maxsize=64)
def _power_law_cdf_cached(beta: float, support_max: int) -> np.ndarray:
    k = np.arange(1, support_max + 1, dtype=np.float64)
    pmf = k ** (-beta)
    cdf = np.cumsum(pmf)
    cdf /= cdf[-1]
    cdf.flags.writeable = False
    return cdf


def power_law_pmf(beta: float, support_max: int) -> np.ndarray:
    """Normalized probabilities Pr(theta = k) proportional to k^(-beta)."""
    k = np.arange(1, support_max + 1, dtype=np.float64)
    pmf = k ** (-beta)
    return pmf / pmf.sum()


@dataclass(frozen=True)
class PowerLawSpec:
    """Discrete power law on {1, ..., support_max} with exponent ``beta``.

    The cumulative table is built once per (beta, support_max) and shared;
    sampling is a single uniform draw plus a binary search.
    """

    beta: float
    support_max: int
    cdf: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.beta <= 1:
            raise ValueError(f"beta must be > 1, got {self.beta}")
        if self.support_max < 1:
            raise ValueError(f"support_max must be >= 1, got {self.support_max}")
        object.__setattr__(self, "cdf",
                           _power_law_cdf_cached(float(self.beta),
                                                 int(self.support_max)))

    @classmethod
    def for_length(cls, n: int, beta: float = 1.5) -> "PowerLawSpec":
        """Spec with support {1, ..., floor(n/2)} as used by heavy-tail
        mutation on length-n vectors."""
        if n < 2:
            raise ValueError(f"need n >= 2 for a non-empty support, got {n}")
        return cls(beta=beta, support_max=n // 2)


def sample_power_law(spec: PowerLawSpec, rng, size: int | None = None):
    """Draw theta with Pr(theta = k) proportional to k^(-beta).

    Returns a plain int for ``size=None``, else an int64 array.
    """
    if size is None:
        return int(np.searchsorted(spec.cdf, rng.random(), side="right")) + 1
    u = rng.random(size)
    return np.searchsorted(spec.cdf, u, side="right").astype(np.int64) + 1


def standard_bit_mutation(x: Solution, rng) -> Solution:
    """Flip each bit independently with probability 1/n."""
    bits = x.bits
    n = len(bits)
    flips = rng.random(n) < (1.0 / n)
    return Solution(bits ^ flips.astype(np.uint8))


def heavy_tail_mutation(x: Solution, spec: PowerLawSpec, rng) -> Solution:
    """Draw theta from the power law, then flip each bit with probability
    theta/n.  May return the parent unchanged; no resampling on zero flips.
    """
    bits = x.bits
    n = len(bits)
    if n < 2:
        raise ValueError(f"heavy-tail mutation needs n >= 2, got {n}")
    theta = sample_power_law(spec, rng)
    flips = rng.random(n) < (theta / n)
    return Solution(bits ^ flips.astype(np.uint8))


def discount_value(mu_i: float, delta: float, alpha: float, ones_z: int) -> float:
    """Expected profit of an item, discounted by the marginal Hoeffding
    uncertainty of adding it to a solution that already has ``ones_z`` items.
    """
    _check_alpha(alpha)
    t = math.log(1.0 / alpha) * 2.0
    return mu_i - delta * (math.sqrt(t * (ones_z + 1)) - math.sqrt(t * ones_z))


def discounted_greedy_uniform_crossover(x: Solution, y: Solution,
                                        instance: Instance,
                                        cfg: FitnessConfig) -> Solution:
    """Offspring inherits every position where the parents agree; the
    disagreeing items are then tried greedily by discounted profit-to-weight
    ratio and added while they fit.

    All discounts are computed once against the inherited common part (its
    cardinality is not re-scored as items are added), always via the
    Hoeffding marginal regardless of which bound drives selection.  Ties in
    the ratio are broken toward the lower item index.
    """
    xb, yb = x.bits, y.bits
    if len(xb) != len(yb):
        raise ValueError(f"parent lengths differ: {len(xb)} != {len(yb)}")
    if len(xb) != instance.n:
        raise ValueError(f"parent length {len(xb)} != instance n {instance.n}")
    same = xb == yb
    z = np.where(same, xb, 0).astype(np.uint8)
    differing = np.nonzero(~same)[0]
    if len(differing) == 0:
        return Solution(z)
    ones_z = int(z.sum())
    t = math.log(1.0 / cfg.alpha) * 2.0
    disc = cfg.delta * (math.sqrt(t * (ones_z + 1)) - math.sqrt(t * ones_z))
    p_prime = instance.mus[differing] - disc
    ratios = p_prime / instance.weights[differing]
    order = np.lexsort((differing, -ratios))
    weight_z = int(instance.weights @ z)
    capacity = instance.capacity
    weights = instance.weights
    for pos in order:
        item = int(differing[pos])
        w_i = int(weights[item])
        if weight_z + w_i <= capacity:
            z[item] = 1
            weight_z += w_i
    return Solution(z)
