"""Knapsack instances with stochastic profits.

An instance has n items with deterministic integer weights and expected
profits, a capacity, and a profit model describing the per-item noise.
Only one profit model is supported: each item's realized profit is drawn
independently and uniformly from [mu_i - delta, mu_i + delta].

Instance file format (UTF-8 text):
    line 1:        <n> <capacity> <delta>
    lines 2..n+1:  <mu_i> <weight_i>
Lines starting with '#' are comments; blank lines are allowed.  The instance
name is not part of the format; it is taken from the filename on load.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

# Capacities for the standard benchmark family, keyed by (kind prefix, n).
BENCHMARK_CAPACITIES = {
    ("uncorr", 100): 2407,
    ("strong", 100): 4187,
    ("uncorr", 300): 6853,
    ("strong", 300): 13821,
    ("uncorr", 500): 11243,
    ("strong", 500): 22223,
}

# Default coefficient range.  The benchmark capacities above sit at a few
# percent of the total item weight when coefficients are drawn from
# {1, ..., 1000}; a larger range starves the knapsack (B under 0.5% of the
# total) and turns the instances into rugged needle hunts.
DEFAULT_COEFF_RANGE = 1_000


class InstanceParseError(ValueError):
    """Raised when an instance file is malformed; message names the line."""


class ProfitKind(enum.Enum):
    UNIFORM_INDEPENDENT = "uniform_independent"


@dataclass(frozen=True)
class ProfitModel:
    """Stochastic profit specification: uniform half-width ``delta``."""

    kind: ProfitKind = ProfitKind.UNIFORM_INDEPENDENT
    delta: float = 0.0

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")


class InstanceKind(enum.Enum):
    UNCORRELATED = "uncorr"
    BOUNDED_STRONGLY_CORRELATED = "strong"


@dataclass(frozen=True)
class FixedCapacity:
    value: int


@dataclass(frozen=True)
class FractionCapacity:
    """Capacity as a fraction of total item weight: B = round(ratio * sum w)."""

    ratio: float


CapacityRule = Union[FixedCapacity, FractionCapacity]


@dataclass(frozen=True, eq=False)
class Instance:
    """Immutable knapsack instance.

    ``mus`` holds expected profits (float64), ``weights`` positive integer
    weights (int64); both have length ``n``.
    """

    name: str
    n: int
    capacity: int
    mus: np.ndarray
    weights: np.ndarray
    profit_model: ProfitModel

    def __post_init__(self):
        mus = np.ascontiguousarray(self.mus, dtype=np.float64)
        weights = np.ascontiguousarray(self.weights, dtype=np.int64)
        object.__setattr__(self, "mus", mus)
        object.__setattr__(self, "weights", weights)
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if len(mus) != self.n or len(weights) != self.n:
            raise ValueError(f"expected {self.n} items, got "
                             f"{len(mus)} profits / {len(weights)} weights")
        if self.capacity < 0:
            raise ValueError(f"capacity must be >= 0, got {self.capacity}")
        if np.any(weights <= 0):
            raise ValueError("all weights must be > 0")
        if np.any(mus < 0):
            raise ValueError("all expected profits must be >= 0")
        mus.flags.writeable = False
        weights.flags.writeable = False

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.name == other.name and self.n == other.n
                and self.capacity == other.capacity
                and self.profit_model == other.profit_model
                and np.array_equal(self.mus, other.mus)
                and np.array_equal(self.weights, other.weights))

    __hash__ = None

    @property
    def delta(self) -> float:
        return self.profit_model.delta

    def with_delta(self, delta: float) -> "Instance":
        """Copy of this instance with a different profit half-width."""
        return Instance(self.name, self.n, self.capacity, self.mus,
                        self.weights, ProfitModel(self.profit_model.kind,
                                                  float(delta)))

    def total_weight(self) -> int:
        return int(self.weights.sum())


@dataclass(frozen=True, eq=False)
class Solution:
    """A 0/1 selection vector over the items of an instance."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if bits.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if np.any(bits > 1):
            raise ValueError("bits must be 0/1")
        object.__setattr__(self, "bits", bits)
        bits.flags.writeable = False

    def __eq__(self, other):
        if not isinstance(other, Solution):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    __hash__ = None

    def __len__(self):
        return len(self.bits)

    @classmethod
    def from_string(cls, text: str) -> "Solution":
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"solution string must be non-empty 0/1, got {text!r}")
        return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    @classmethod
    def zeros(cls, n: int) -> "Solution":
        return cls(np.zeros(n, dtype=np.uint8))

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    @property
    def ones(self) -> int:
        return int(self.bits.sum())


@dataclass(frozen=True)
class Aggregates:
    """Additive solution summaries: weight, expected profit, cardinality,
    and profit variance under the instance's profit model."""

    weight: int
    mu: float
    ones: int
    variance: float


def uniform_profit_variance(ones: int, delta: float) -> float:
    """Profit variance of a solution with ``ones`` selected items whose
    profits are independent uniform draws of half-width ``delta``.

    A uniform variable on an interval of half-width d has variance d^2/3;
    independence makes the total ones * d^2 / 3.
    """
    return ones * (delta * delta) / 3.0


def aggregates(instance: Instance, x: Solution) -> Aggregates:
    """Exact weight / expected profit / cardinality / variance of ``x``."""
    bits = x.bits
    if len(bits) != instance.n:
        raise ValueError(f"solution length {len(bits)} != instance n {instance.n}")
    weight = int(instance.weights @ bits)
    mu = float(instance.mus @ bits)
    ones = int(bits.sum())
    variance = uniform_profit_variance(ones, instance.profit_model.delta)
    return Aggregates(weight=weight, mu=mu, ones=ones, variance=variance)


def _binary_split(multiplicity: int) -> list:
    """Split a multiplicity into powers of two plus remainder.

    10 -> [1, 2, 4, 3]; 1 -> [1].  The standard expansion of a bounded item
    into 0/1 items.
    """
    coeffs = []
    remaining = multiplicity
    power = 1
    while power <= remaining:
        coeffs.append(power)
        remaining -= power
        power *= 2
    if remaining:
        coeffs.append(remaining)
    return coeffs


def _resolve_capacity(rule: CapacityRule, weights: np.ndarray) -> int:
    if isinstance(rule, FixedCapacity):
        capacity = int(rule.value)
        if capacity < 0:
            raise ValueError("fixed capacity must be >= 0")
        return capacity
    if isinstance(rule, FractionCapacity):
        return int(round(rule.ratio * float(weights.sum())))
    raise TypeError(f"unknown capacity rule: {rule!r}")


def generate_instance(kind: InstanceKind, n: int, coeff_range: int,
                      capacity: CapacityRule, seed: int,
                      name: str | None = None) -> Instance:
    """Generate a benchmark instance, deterministic per argument tuple.

    Uncorrelated: weights and expected profits drawn independently and
    uniformly from {1, ..., coeff_range}.

    Bounded strongly correlated: bounded cores (weight uniform in
    {1, ..., coeff_range}, multiplicity uniform in {1, ..., 10}) are expanded
    into 0/1 items via binary splitting of the multiplicity; every emitted
    item keeps the strong correlation mu_i = w_i + coeff_range/10.  The
    expansion is truncated to exactly n items.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if coeff_range < 1:
        raise ValueError(f"coeff_range must be >= 1, got {coeff_range}")
    rng = np.random.default_rng(seed)
    if kind is InstanceKind.UNCORRELATED:
        weights = rng.integers(1, coeff_range + 1, size=n, dtype=np.int64)
        mus = rng.integers(1, coeff_range + 1, size=n).astype(np.float64)
    elif kind is InstanceKind.BOUNDED_STRONGLY_CORRELATED:
        shift = coeff_range / 10.0
        weight_list: list = []
        while len(weight_list) < n:
            core_w = int(rng.integers(1, coeff_range + 1))
            multiplicity = int(rng.integers(1, 11))
            for coeff in _binary_split(multiplicity):
                weight_list.append(coeff * core_w)
        weights = np.asarray(weight_list[:n], dtype=np.int64)
        mus = weights.astype(np.float64) + shift
    else:
        raise TypeError(f"unknown instance kind: {kind!r}")
    capacity_value = _resolve_capacity(capacity, weights)
    if name is None:
        name = f"{kind.value}_{n}_R{coeff_range}_s{seed}"
    return Instance(name=name, n=n, capacity=capacity_value, mus=mus,
                    weights=weights, profit_model=ProfitModel())


def benchmark_capacity(kind: InstanceKind, n: int) -> int | None:
    """Capacity preset for the published benchmark family, if known."""
    return BENCHMARK_CAPACITIES.get((kind.value, n))


def _format_number(value: float) -> str:
    if float(value) == int(value):
        return str(int(value))
    return repr(float(value))


def serialize_instance(instance: Instance) -> str:
    """Canonical text form, exactly n + 1 lines; structurally equal
    instances yield identical bytes.  The name travels out of band (it is
    taken from the filename on load)."""
    lines = [f"{instance.n} {instance.capacity} "
             f"{_format_number(instance.profit_model.delta)}"]
    for mu, w in zip(instance.mus, instance.weights):
        lines.append(f"{_format_number(mu)} {int(w)}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str, name: str = "instance") -> Instance:
    """Parse the instance file format; errors name the offending line."""
    header = None
    mus: list = []
    weights: list = []
    n = capacity = None
    delta = 0.0
    items_expected = 0
    last_line_no = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        last_line_no = line_no
        line = raw.strip()
        if line.startswith("#") or not line:
            continue
        fields = line.split()
        if header is None:
            if len(fields) != 3:
                raise InstanceParseError(
                    f"line {line_no}: header must be '<n> <capacity> <delta>'")
            try:
                n = int(fields[0])
                capacity = int(fields[1])
                delta = float(fields[2])
            except ValueError:
                raise InstanceParseError(
                    f"line {line_no}: non-numeric header field") from None
            if n < 1:
                raise InstanceParseError(f"line {line_no}: n must be >= 1")
            if capacity < 0:
                raise InstanceParseError(f"line {line_no}: capacity must be >= 0")
            if delta < 0:
                raise InstanceParseError(f"line {line_no}: delta must be >= 0")
            header = line_no
            items_expected = n
            continue
        if len(mus) >= items_expected:
            raise InstanceParseError(
                f"line {line_no}: expected {items_expected} items, found more")
        if len(fields) != 2:
            raise InstanceParseError(
                f"line {line_no}: item line must be '<mu> <weight>'")
        try:
            mu = float(fields[0])
            weight = int(fields[1])
        except ValueError:
            raise InstanceParseError(
                f"line {line_no}: non-numeric item field") from None
        if mu < 0:
            raise InstanceParseError(f"line {line_no}: mu must be >= 0")
        if weight <= 0:
            raise InstanceParseError(f"line {line_no}: weight must be > 0")
        mus.append(mu)
        weights.append(weight)
    if header is None:
        raise InstanceParseError("line 1: missing header")
    if len(mus) != items_expected:
        raise InstanceParseError(
            f"line {last_line_no + 1}: expected {items_expected} items, "
            f"found {len(mus)}")
    return Instance(name=name, n=n, capacity=capacity,
                    mus=np.asarray(mus, dtype=np.float64),
                    weights=np.asarray(weights, dtype=np.int64),
                    profit_model=ProfitModel(delta=delta))


def load_instance(path) -> Instance:
    from pathlib import Path

    p = Path(path)
    return parse_instance(p.read_text(encoding="utf-8"), name=p.stem)


def save_instance(instance: Instance, path) -> None:
    from pathlib import Path

    Path(path).write_text(serialize_instance(instance), encoding="utf-8")
