#!/usr/bin/env python3
"""Benchmark the compiled distance kernels against the pure-NumPy fallback.

Times the window-filter kernel (the mining hot loop) and an end-to-end mining
run on a fixed synthetic dataset, for every importable backend.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from trajmine import kernels  # noqa: E402
from trajmine.mining import MinerConfig, mine  # noqa: E402
from trajmine.synth import SynthConfig, gen_null  # noqa: E402


def bench_filter(impl, repeats):
    rng = np.random.default_rng(0)
    big = np.ascontiguousarray(rng.normal(0, 2, (4000, 10)))
    starts = np.arange(0, 3990, dtype=np.int64)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for anchor in range(0, 400, 40):
            impl.filter_within(big, anchor, anchor + 9, big, starts, 10, 0, 3.0)
        best = min(best, time.perf_counter() - t0)
    n_checks = 10 * starts.size
    return best, n_checks / best


def bench_mine(backend_name, repeats):
    ds = gen_null(
        SynthConfig(
            n_matrices=16, n_pos=8, min_length=20, max_length=30, n_agents=2,
            step_scale=0.5, motif_length=5, plant_rate=0.0, seed=11,
            bounds=(0.0, 6.0, 0.0, 6.0),
        )
    )
    config = MinerConfig(min_length=5, epsilon=4.0, permutations=200, prng_seed=2)
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = mine(ds, config)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    backends = kernels.backends()
    print(f"backends found: {', '.join(sorted(backends))}")
    print(f"active backend (this process): {kernels.BACKEND}")
    print()
    print(f"{'backend':<10} {'filter time':>12} {'window checks/s':>16}")
    rates = {}
    for name in sorted(backends):
        best, rate = bench_filter(backends[name], args.repeats)
        rates[name] = rate
        print(f"{name:<10} {best * 1e3:>10.1f}ms {rate:>16,.0f}")
    if {"cython", "python"} <= set(rates):
        print(f"\nspeedup (cython / python): {rates['cython'] / rates['python']:.1f}x")

    # end-to-end mining uses the backend selected at import; to measure the
    # other backend run again with TRAJMINE_PURE_PYTHON=1
    best, result = bench_mine(kernels.BACKEND, args.repeats)
    print(
        f"\nmine() with '{kernels.BACKEND}' backend: {best * 1e3:.0f}ms "
        f"({result.counters.nodes_visited} nodes, "
        f"{result.counters.distance_evals:,} window comparisons)"
    )


if __name__ == "__main__":
    main()
