"""Tail-bound fitness for profit guarantees.

The objective is the largest profit level P such that a solution's realized
profit falls below P with probability at most alpha.  Two distribution-aware
discounts provide certified lower bounds on P for a feasible solution x:

* Cantelli / one-sided Chebyshev (needs only mean and variance):
      mu(x) - sqrt((1 - alpha)/alpha * v(x))
* additive Hoeffding (needs independent profits in bounded intervals of
  half-width delta):
      mu(x) - delta * sqrt(ln(1/alpha) * 2 * ones(x))

Fitness is the pair (violation, discounted profit), compared
lexicographically: less violation always wins; profit breaks ties.
Comparisons are exact on the computed float64 values -- no epsilon -- because
the evolutionary engines accept offspring on >= and an epsilon would distort
plateau moves.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .instances import Aggregates, Instance, Solution, uniform_profit_variance


class Bound(enum.Enum):
    CHEBYSHEV = "cheb"
    HOEFFDING = "hoef"


class Ordering(enum.Enum):
    A_BETTER = 1
    EQUAL = 0
    B_BETTER = -1


@dataclass(frozen=True)
class FitnessConfig:
    """Which tail bound to use, at which violation probability ``alpha``,
    with profit half-width ``delta`` (overrides the instance's own)."""

    bound: Bound
    alpha: float
    delta: float

    def __post_init__(self):
        _check_alpha(self.alpha)
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")


@dataclass(frozen=True)
class FitnessValue:
    """(constraint violation, discounted profit); violation == 0 iff feasible.

    For a feasible solution, ``profit`` is the certified level P: realized
    profit drops below it with probability at most alpha.  It may be
    negative; small uncertain solutions are not clamped so that the fitness
    landscape stays informative among them.
    """

    violation: float
    profit: float

    def is_feasible(self) -> bool:
        return self.violation == 0


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")


def violation(instance: Instance, agg: Aggregates) -> float:
    """Amount by which the capacity is exceeded: max(w(x) - B, 0)."""
    over = agg.weight - instance.capacity
    return float(over) if over > 0 else 0.0


def profit_cheb(mu: float, variance: float, alpha: float) -> float:
    """Chebyshev/Cantelli-discounted profit: mu - sqrt((1-alpha)/alpha * v).

    Distribution-free: valid for any profit distribution with the given mean
    and variance, no independence required.
    """
    _check_alpha(alpha)
    if variance < 0:
        raise ValueError(f"variance must be >= 0, got {variance}")
    return mu - math.sqrt((1.0 - alpha) / alpha * variance)


def profit_hoef(mu: float, delta: float, ones: int, alpha: float) -> float:
    """Hoeffding-discounted profit: mu - delta * sqrt(ln(1/alpha) * 2 * ones).

    Valid for profits drawn independently from intervals of half-width
    ``delta``.  Returns ``mu`` unchanged when ``ones`` or ``delta`` is zero.
    """
    _check_alpha(alpha)
    if ones < 0:
        raise ValueError(f"ones must be >= 0, got {ones}")
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    return mu - delta * math.sqrt(math.log(1.0 / alpha) * 2.0 * ones)


def fitness(instance: Instance, x: Solution, cfg: FitnessConfig) -> FitnessValue:
    """Evaluate the penalty fitness of ``x``: one fitness evaluation."""
    bits = x.bits
    if len(bits) != instance.n:
        raise ValueError(f"solution length {len(bits)} != instance n {instance.n}")
    weight = int(instance.weights @ bits)
    mu = float(instance.mus @ bits)
    ones = int(bits.sum())
    over = weight - instance.capacity
    u = float(over) if over > 0 else 0.0
    if cfg.bound is Bound.CHEBYSHEV:
        p = profit_cheb(mu, uniform_profit_variance(ones, cfg.delta), cfg.alpha)
    else:
        p = profit_hoef(mu, cfg.delta, ones, cfg.alpha)
    return FitnessValue(violation=u, profit=p)


def compare_lex(a: FitnessValue, b: FitnessValue) -> Ordering:
    """Lexicographic comparison: lower violation wins, then higher profit."""
    if a.violation < b.violation:
        return Ordering.A_BETTER
    if a.violation > b.violation:
        return Ordering.B_BETTER
    if a.profit > b.profit:
        return Ordering.A_BETTER
    if a.profit < b.profit:
        return Ordering.B_BETTER
    return Ordering.EQUAL


def fitness_geq(a: FitnessValue, b: FitnessValue) -> bool:
    """Selection predicate f(a) >= f(b): a is at least as good as b."""
    return compare_lex(a, b) is not Ordering.B_BETTER


class BoundPreference(enum.Enum):
    CHEBYSHEV = "cheb"
    HOEFFDING = "hoef"
    TIE = "tie"


def preferred_bound(alpha: float) -> BoundPreference:
    """Which bound gives the larger (tighter) discounted profit for
    independent uniform profits; depends only on ``alpha``.

    The Hoeffding discount is smaller exactly when
    ln(1/alpha) * alpha / (1 - alpha) < 1/6.
    """
    _check_alpha(alpha)
    g = math.log(1.0 / alpha) * alpha / (1.0 - alpha)
    sixth = 1.0 / 6.0
    if g < sixth:
        return BoundPreference.HOEFFDING
    if g > sixth:
        return BoundPreference.CHEBYSHEV
    return BoundPreference.TIE
