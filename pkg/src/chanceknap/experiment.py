"""Batch experiment runner: instance x alpha x delta x bound x algorithm
grids with repeated seeded runs, rank-test markers, and table emission.

Every run's seed is derived by hashing (master seed, instance name, alpha,
delta, bound, algorithm label, run index), so the per-cell streams never
move when the grid is extended, and any worker count produces identical
output.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .engines import Algorithm, AlgorithmConfig, run
from .fitness import Bound, FitnessConfig
from .instances import (FixedCapacity, FractionCapacity, Instance,
                        InstanceKind, benchmark_capacity, generate_instance,
                        load_instance, parse_instance, serialize_instance,
                        DEFAULT_COEFF_RANGE)
from .stats import pairwise_markers

# profile name -> (budget, runs)
PROFILES = {"desk": (100_000, 10), "paper": (1_000_000, 30)}


def derive_seed(master_seed: int, *parts) -> int:
    """Stable 64-bit seed from the master seed and cell coordinates."""
    text = "|".join([str(int(master_seed))] + [repr(p) for p in parts])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class AlgorithmSpec:
    """Template for one algorithm column of the experiment."""

    algorithm: Algorithm
    mu: int = 10
    crossover_prob: float = 0.8
    beta: float = 1.5
    label: str = ""

    def resolved_label(self) -> str:
        return self.label or self.algorithm.value

    def config(self, budget: int, seed: int) -> AlgorithmConfig:
        return AlgorithmConfig(algorithm=self.algorithm, budget=budget,
                               seed=seed, mu=self.mu,
                               crossover_prob=self.crossover_prob,
                               beta=self.beta)


@dataclass
class ExperimentConfig:
    instances: List[Instance]
    alphas: List[float]
    deltas: List[float]
    bounds: List[Bound]
    algorithms: List[AlgorithmSpec]
    runs: int
    budget: int
    master_seed: int
    workers: int = 1
    trajectory_stride: int = 1000
    keep_trajectories: bool = False
    significance: float = 0.05

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        for alpha in self.alphas:
            if not 0.0 < alpha < 1.0:
                raise ValueError(f"alpha must be in (0, 1), got {alpha}")
        labels = [spec.resolved_label() for spec in self.algorithms]
        if len(set(labels)) != len(labels):
            raise ValueError(f"algorithm labels must be unique, got {labels}")


@dataclass
class ResultRow:
    instance: str
    capacity: int
    alpha: float
    delta: float
    bound: Bound
    algorithm: str
    mean: float
    std: float
    values: Tuple[float, ...]
    markers: Dict[str, str] = field(default_factory=dict)
    trajectories: Optional[Tuple[Tuple[Tuple[int, float], ...], ...]] = None


def _sample_std(values: Sequence[float], mean: float) -> float:
    if len(values) < 2:
        return 0.0
    return math.sqrt(sum((v - mean) ** 2 for v in values) / (len(values) - 1))


def _run_cell(args):
    (instance_text, instance_name, alpha, delta, bound_value, spec, runs,
     budget, master_seed, stride, kernel, keep_traj) = args
    instance = parse_instance(instance_text, name=instance_name)
    fit = FitnessConfig(bound=Bound(bound_value), alpha=alpha, delta=delta)
    label = spec.resolved_label()
    values = []
    trajectories = []
    for run_idx in range(runs):
        seed = derive_seed(master_seed, instance_name, alpha, delta,
                           bound_value, label, run_idx)
        result = run(instance, fit, spec.config(budget, seed), kernel=kernel,
                     trajectory_stride=stride)
        values.append(result.best_fitness.profit)
        if keep_traj:
            trajectories.append(result.trajectory)
    return values, trajectories


def run_batch(cfg: ExperimentConfig, kernel: str = "auto") -> List[ResultRow]:
    """Execute the full grid; deterministic per master seed and independent
    of the worker count."""
    cells = []
    for instance in cfg.instances:
        text = serialize_instance(instance)
        for alpha in cfg.alphas:
            for delta in cfg.deltas:
                for bound in cfg.bounds:
                    for spec in cfg.algorithms:
                        cells.append((text, instance.name, float(alpha),
                                      float(delta), bound.value, spec,
                                      cfg.runs, cfg.budget, cfg.master_seed,
                                      cfg.trajectory_stride, kernel,
                                      cfg.keep_trajectories))
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(_run_cell, cells))
    else:
        outcomes = [_run_cell(cell) for cell in cells]

    capacities = {inst.name: inst.capacity for inst in cfg.instances}
    rows: List[ResultRow] = []
    for cell, (values, trajectories) in zip(cells, outcomes):
        (_text, name, alpha, delta, bound_value, spec, *_rest) = cell
        mean = sum(values) / len(values)
        rows.append(ResultRow(
            instance=name, capacity=capacities[name], alpha=alpha,
            delta=delta, bound=Bound(bound_value),
            algorithm=spec.resolved_label(), mean=mean,
            std=_sample_std(values, mean), values=tuple(values),
            trajectories=tuple(trajectories) if trajectories else None))

    n_algos = len(cfg.algorithms)
    for start in range(0, len(rows), n_algos):
        group = rows[start:start + n_algos]
        if len(group) < 2:
            continue
        markers = pairwise_markers(
            {row.algorithm: row.values for row in group},
            alpha_sig=cfg.significance)
        for row in group:
            row.markers = markers[row.algorithm]
    return rows


def _fmt(value: float) -> str:
    return repr(float(value))


def _stat_field(row: ResultRow, label_index: Dict[str, int]) -> str:
    parts = []
    for label, index in label_index.items():
        if label == row.algorithm:
            continue
        marker = row.markers.get(label, "*")
        parts.append(f"{index}({marker})")
    return " ".join(parts)


def _label_order(rows: Sequence[ResultRow]) -> Dict[str, int]:
    order: Dict[str, int] = {}
    for row in rows:
        if row.algorithm not in order:
            order[row.algorithm] = len(order) + 1
    return order


CSV_HEADER = "instance,B,alpha,delta,bound,algorithm,mean,std,stat"


def render_results_csv(rows: Sequence[ResultRow]) -> str:
    label_index = _label_order(rows)
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join([
            row.instance, str(row.capacity), _fmt(row.alpha), _fmt(row.delta),
            row.bound.value, row.algorithm, _fmt(row.mean), _fmt(row.std),
            _stat_field(row, label_index)]))
    return "\n".join(lines) + "\n"


def render_results_json(rows: Sequence[ResultRow]) -> str:
    payload = []
    for row in rows:
        payload.append({
            "instance": row.instance, "B": row.capacity, "alpha": row.alpha,
            "delta": row.delta, "bound": row.bound.value,
            "algorithm": row.algorithm, "mean": row.mean, "std": row.std,
            "values": list(row.values), "markers": dict(row.markers)})
    return json.dumps(payload, indent=2) + "\n"


def parse_results_json(text: str) -> List[ResultRow]:
    rows = []
    for entry in json.loads(text):
        rows.append(ResultRow(
            instance=entry["instance"], capacity=entry["B"],
            alpha=entry["alpha"], delta=entry["delta"],
            bound=Bound(entry["bound"]), algorithm=entry["algorithm"],
            mean=entry["mean"], std=entry["std"],
            values=tuple(entry["values"]), markers=dict(entry["markers"])))
    return rows


def emit_results(rows: Sequence[ResultRow], fmt: str, path) -> None:
    """Write rows as CSV or JSON with full-precision numbers."""
    if fmt == "csv":
        text = render_results_csv(rows)
    elif fmt == "json":
        text = render_results_json(rows)
    else:
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    Path(path).write_text(text, encoding="utf-8")


def render_trajectories_csv(rows: Sequence[ResultRow]) -> str:
    """Plot-data variant: one line per recorded trajectory point per run."""
    lines = ["instance,alpha,delta,bound,algorithm,run,evaluation,profit"]
    for row in rows:
        if not row.trajectories:
            continue
        for run_idx, trajectory in enumerate(row.trajectories):
            for evaluation, profit in trajectory:
                lines.append(",".join([
                    row.instance, _fmt(row.alpha), _fmt(row.delta),
                    row.bound.value, row.algorithm, str(run_idx),
                    str(evaluation), _fmt(profit)]))
    return "\n".join(lines) + "\n"


def emit_trajectories(rows: Sequence[ResultRow], path) -> None:
    Path(path).write_text(render_trajectories_csv(rows), encoding="utf-8")


_KIND_ALIASES = {
    "uncorr": InstanceKind.UNCORRELATED,
    "uncorrelated": InstanceKind.UNCORRELATED,
    "strong": InstanceKind.BOUNDED_STRONGLY_CORRELATED,
    "bounded-strong": InstanceKind.BOUNDED_STRONGLY_CORRELATED,
    "bounded_strongly_correlated": InstanceKind.BOUNDED_STRONGLY_CORRELATED,
}


def parse_kind(text: str) -> InstanceKind:
    try:
        return _KIND_ALIASES[text.lower()]
    except KeyError:
        raise ValueError(f"unknown instance kind {text!r}; expected one of "
                         f"{sorted(_KIND_ALIASES)}") from None


def _capacity_rule(kind: InstanceKind, n: int, spec_value):
    if spec_value is None:
        preset = benchmark_capacity(kind, n)
        if preset is not None:
            return FixedCapacity(preset)
        return FractionCapacity(0.5)
    if isinstance(spec_value, bool):
        raise ValueError("capacity must be a number")
    if isinstance(spec_value, int):
        return FixedCapacity(spec_value)
    if isinstance(spec_value, float):
        if not 0.0 < spec_value <= 1.0:
            raise ValueError(f"fractional capacity must be in (0, 1], "
                             f"got {spec_value}")
        return FractionCapacity(spec_value)
    raise ValueError(f"capacity must be int or float, got {spec_value!r}")


def instance_from_generate_spec(spec: dict) -> Instance:
    kind = parse_kind(spec["kind"])
    n = int(spec["n"])
    r = int(spec.get("r", DEFAULT_COEFF_RANGE))
    seed = int(spec.get("seed", 0))
    rule = _capacity_rule(kind, n, spec.get("capacity"))
    return generate_instance(kind, n, r, rule, seed,
                             name=spec.get("name"))


def _algorithm_spec(entry: dict) -> AlgorithmSpec:
    algo = Algorithm(entry["algo"])
    return AlgorithmSpec(algorithm=algo, mu=int(entry.get("mu", 10)),
                         crossover_prob=float(entry.get("pc", 0.8)),
                         beta=float(entry.get("beta", 1.5)),
                         label=entry.get("label", ""))


def load_experiment_config(path, profile: str | None = None,
                           workers: int | None = None) -> ExperimentConfig:
    """Load a declarative JSON config; an optional profile overrides the
    budget and run count (desk: 1e5/10, paper: 1e6/30)."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    base = Path(path).parent

    instances = []
    for source in raw["instances"]:
        if "path" in source:
            inst_path = Path(source["path"])
            if not inst_path.is_absolute():
                inst_path = base / inst_path
            instances.append(load_instance(inst_path))
        elif "generate" in source:
            instances.append(instance_from_generate_spec(source["generate"]))
        else:
            raise ValueError(f"instance source needs 'path' or 'generate': "
                             f"{source!r}")

    budget = int(raw.get("budget", PROFILES["desk"][0]))
    runs = int(raw.get("runs", PROFILES["desk"][1]))
    if profile is not None:
        if profile not in PROFILES:
            raise ValueError(f"profile must be one of {sorted(PROFILES)}, "
                             f"got {profile!r}")
        budget, runs = PROFILES[profile]

    return ExperimentConfig(
        instances=instances,
        alphas=[float(a) for a in raw["alphas"]],
        deltas=[float(d) for d in raw["deltas"]],
        bounds=[Bound(b) for b in raw["bounds"]],
        algorithms=[_algorithm_spec(e) for e in raw["algorithms"]],
        runs=runs, budget=budget,
        master_seed=int(raw.get("master_seed", 0)),
        workers=workers if workers is not None else int(raw.get("workers", 1)),
        trajectory_stride=int(raw.get("trajectory_stride", 1000)),
        keep_trajectories=bool(raw.get("keep_trajectories", False)),
        significance=float(raw.get("significance", 0.05)))
