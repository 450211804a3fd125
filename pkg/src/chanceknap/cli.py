"""Command-line interface.

Subcommands:
  solve       run one algorithm on one instance, print the result
  experiment  run a declarative grid of configurations, write a table
  validate    Monte Carlo check of a solution's profit guarantee

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engines import Algorithm, AlgorithmConfig, run
from .experiment import (emit_results, emit_trajectories,
                         instance_from_generate_spec, load_experiment_config,
                         run_batch)
from .fitness import Bound, FitnessConfig, fitness
from .instances import Solution, load_instance
from .oracles import estimate_violation_probability


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; this CLI uses 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="chanceknap",
                     description="Evolutionary solvers for the knapsack "
                                 "problem with stochastic profits")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    solve = sub.add_parser("solve", help="run one algorithm on one instance")
    source = solve.add_mutually_exclusive_group(required=True)
    source.add_argument("--instance", help="instance file path")
    source.add_argument("--generate", metavar="KIND:N:R:SEED",
                        help="generate an instance, e.g. uncorr:100:10000:1")
    solve.add_argument("--algo", choices=[a.value for a in Algorithm],
                       default="1p1")
    solve.add_argument("--bound", choices=[b.value for b in Bound],
                       default="hoef")
    solve.add_argument("--alpha", type=float, default=0.1)
    solve.add_argument("--delta", type=float, default=None,
                       help="profit half-width (default: instance value)")
    solve.add_argument("--budget", type=int, default=100_000)
    solve.add_argument("--mu", type=int, default=10)
    solve.add_argument("--pc", type=float, default=0.8)
    solve.add_argument("--beta", type=float, default=1.5)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--out", help="write the run result as JSON")

    experiment = sub.add_parser("experiment", help="run a configuration grid")
    experiment.add_argument("--config", required=True,
                            help="JSON experiment configuration")
    experiment.add_argument("--profile", choices=["desk", "paper"],
                            default=None,
                            help="override budget/runs: desk=1e5/10, "
                                 "paper=1e6/30")
    experiment.add_argument("--workers", type=int, default=None)
    experiment.add_argument("--format", choices=["csv", "json"],
                            default="csv")
    experiment.add_argument("--out", required=True)
    experiment.add_argument("--trajectories",
                            help="also write per-run trajectory points (CSV)")

    validate = sub.add_parser("validate",
                              help="Monte Carlo check of a profit guarantee")
    validate.add_argument("--instance", required=True)
    validate.add_argument("--solution", required=True, metavar="BITSTRING")
    validate.add_argument("--bound", choices=[b.value for b in Bound],
                          default="hoef")
    validate.add_argument("--alpha", type=float, default=0.1)
    validate.add_argument("--delta", type=float, default=None)
    validate.add_argument("--samples", type=int, default=1_000_000)
    validate.add_argument("--seed", type=int, default=0)
    return parser


def _parse_generate(text: str):
    parts = text.split(":")
    if len(parts) != 4:
        raise ValueError(f"--generate expects KIND:N:R:SEED, got {text!r}")
    kind, n, r, seed = parts
    return {"kind": kind, "n": int(n), "r": int(r), "seed": int(seed)}


def _cmd_solve(args) -> int:
    if args.instance:
        instance = load_instance(args.instance)
    else:
        instance = instance_from_generate_spec(_parse_generate(args.generate))
    delta = instance.profit_model.delta if args.delta is None else args.delta
    fit = FitnessConfig(bound=Bound(args.bound), alpha=args.alpha, delta=delta)
    alg = AlgorithmConfig(algorithm=Algorithm(args.algo), budget=args.budget,
                          seed=args.seed, mu=args.mu,
                          crossover_prob=args.pc, beta=args.beta)
    result = run(instance, fit, alg)
    bits = result.best_solution.to_string()
    print(f"instance: {instance.name} (n={instance.n}, B={instance.capacity})")
    print(f"algorithm: {args.algo}  bound: {args.bound}  "
          f"alpha: {args.alpha!r}  delta: {delta!r}")
    print(f"evaluations: {result.evaluations_used}  seed: {result.seed}")
    print(f"violation: {result.best_fitness.violation!r}")
    print(f"best discounted profit: {result.best_fitness.profit!r}")
    print(f"bits: {bits}")
    if args.out:
        payload = {
            "instance": instance.name, "n": instance.n,
            "B": instance.capacity, "algorithm": args.algo,
            "bound": args.bound, "alpha": args.alpha, "delta": delta,
            "budget": args.budget, "seed": result.seed,
            "evaluations": result.evaluations_used,
            "violation": result.best_fitness.violation,
            "profit": result.best_fitness.profit, "bits": bits,
            "trajectory": [[e, p] for e, p in result.trajectory],
        }
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n",
                                  encoding="utf-8")
    return 0


def _cmd_experiment(args) -> int:
    cfg = load_experiment_config(args.config, profile=args.profile,
                                 workers=args.workers)
    if args.trajectories:
        cfg.keep_trajectories = True
    rows = run_batch(cfg)
    emit_results(rows, args.format, args.out)
    if args.trajectories:
        emit_trajectories(rows, args.trajectories)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_validate(args) -> int:
    instance = load_instance(args.instance)
    if args.delta is not None:
        instance = instance.with_delta(args.delta)
    delta = instance.profit_model.delta
    solution = Solution.from_string(args.solution)
    fit = FitnessConfig(bound=Bound(args.bound), alpha=args.alpha, delta=delta)
    value = fitness(instance, solution, fit)
    estimate = estimate_violation_probability(instance, solution,
                                              value.profit, args.samples,
                                              args.seed)
    passed = estimate.estimate <= args.alpha + 3.0 * estimate.std_error
    print(f"instance: {instance.name}  bound: {args.bound}  "
          f"alpha: {args.alpha!r}  delta: {delta!r}")
    print(f"violation: {value.violation!r}")
    print(f"discounted profit: {value.profit!r}")
    print(f"violation estimate: {estimate.estimate!r} "
          f"({estimate.violations}/{estimate.samples})")
    print(f"std error: {estimate.std_error!r}")
    print("PASS" if passed else "FAIL")
    return 0 if passed else 2


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "experiment":
            return _cmd_experiment(args)
        if args.command == "validate":
            return _cmd_validate(args)
        parser.error(f"unknown command {args.command!r}")
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
