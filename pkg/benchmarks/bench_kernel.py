#!/usr/bin/env python3
"""Benchmark the compiled simulation kernel against the pure-Python fallback.

Runs identical replications (same derived seeds, bit-identical results) of a
few representative workloads on every available backend and reports simulated
seconds per wall second plus the speedup.

    python3 benchmarks/bench_kernel.py [--duration 60] [--reps 3]
"""

from __future__ import annotations

import argparse
import time

from wlansat import SimConfig, bundled_scenario, simulate, with_cw_min, with_n_nodes
from wlansat.sim import available_backends

WORKLOADS = [
    ("triangle, N=16, cw=32", lambda: with_n_nodes(bundled_scenario("i"), 16)),
    ("line x5, N=16, cw=32", lambda: with_n_nodes(bundled_scenario("iii"), 16)),
    ("line x5, N=16, cw=16", lambda: with_cw_min(with_n_nodes(bundled_scenario("iii"), 16), 16)),
    ("line x3, N=1, cw=8192", lambda: with_cw_min(with_n_nodes(bundled_scenario("ii"), 1), 8192)),
]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--duration", type=float, default=60.0)
    parser.add_argument("--reps", type=int, default=3)
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}   duration: {args.duration}s x {args.reps} reps")
    header = f"{'workload':<26} " + " ".join(f"{b + ' (s)':>12}" for b in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9} {'identical':>10}"
    print(header)

    for label, build in WORKLOADS:
        config = SimConfig(build(), duration=args.duration, warmup=1.0, seed=7, replications=args.reps)
        timings = {}
        counts = {}
        for backend in backends:
            start = time.perf_counter()
            result = simulate(config, backend=backend)
            timings[backend] = time.perf_counter() - start
            counts[backend] = (result.successes, result.collisions)
        row = f"{label:<26} " + " ".join(f"{timings[b]:>12.3f}" for b in backends)
        if len(backends) == 2:
            row += f" {timings['python'] / timings['c']:>8.1f}x"
            row += f" {str(counts['c'] == counts['python']):>10}"
        print(row)


if __name__ == "__main__":
    main()
