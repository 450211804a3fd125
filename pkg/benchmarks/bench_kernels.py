#!/usr/bin/env python3
"""Benchmark the compiled engine kernels against the pure NumPy fallback.

Runs each algorithm once per kernel on the same seeds and reports fitness
evaluations per second plus the speedup.  Also cross-checks that both
kernels return identical results (they share the random stream discipline).

Usage:
    python benchmarks/bench_kernels.py [--budget 200000] [--n 100 300] [--seed 0]
"""

import argparse
import time

from chanceknap.engines import (Algorithm, AlgorithmConfig, HAVE_COMPILED,
                                run)
from chanceknap.fitness import Bound, FitnessConfig
from chanceknap.instances import (FixedCapacity, InstanceKind,
                                  generate_instance)


def time_run(instance, fit, alg, kernel):
    start = time.perf_counter()
    result = run(instance, fit, alg, kernel=kernel)
    elapsed = time.perf_counter() - start
    return result, elapsed


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--budget", type=int, default=200_000)
    parser.add_argument("--n", type=int, nargs="+", default=[100, 300])
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if not HAVE_COMPILED:
        print("compiled kernels unavailable; timing the fallback only")

    fit = FitnessConfig(bound=Bound.HOEFFDING, alpha=0.01, delta=25.0)
    header = (f"{'algorithm':<8} {'n':>5} {'python ev/s':>12} "
              f"{'compiled ev/s':>14} {'speedup':>8}  identical")
    print(header)
    print("-" * len(header))
    for n in args.n:
        instance = generate_instance(InstanceKind.UNCORRELATED, n, 1000,
                                     FixedCapacity(24 * n), seed=args.seed)
        for algo in Algorithm:
            alg = AlgorithmConfig(algo, budget=args.budget, seed=args.seed)
            py_result, py_time = time_run(instance, fit, alg, "python")
            py_rate = args.budget / py_time
            if HAVE_COMPILED:
                c_result, c_time = time_run(instance, fit, alg, "compiled")
                c_rate = args.budget / c_time
                same = (py_result.best_solution == c_result.best_solution
                        and py_result.best_fitness == c_result.best_fitness
                        and py_result.trajectory == c_result.trajectory)
                print(f"{algo.value:<8} {n:>5} {py_rate:>12.0f} "
                      f"{c_rate:>14.0f} {c_time and py_time / c_time:>7.1f}x"
                      f"  {same}")
            else:
                print(f"{algo.value:<8} {n:>5} {py_rate:>12.0f} "
                      f"{'-':>14} {'-':>8}  -")


if __name__ == "__main__":
    main()
