"""Compare the JIT-compiled kernels against the interpreted fallback.

Run without arguments to benchmark both paths; the script re-invokes
itself in a subprocess with ``RMADVICE_DISABLE_NUMBA=1`` (and without it)
because the path is fixed at import time.

    python3 benchmarks/kernel_benchmark.py
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def bench_one(label, fn, *args, repeats=5):
    fn(*args)  # warm-up: triggers JIT compilation on the numba path
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return label, min(times)


def run_workloads():
    from rmadvice import core, kernels, lp

    rng = np.random.default_rng(7)
    results = []

    m, n, T = 8, 500, 200_000
    fare_idx = rng.integers(0, m, size=T).astype(np.int64)
    levels = np.sort(rng.uniform(0.0, n, size=m))
    results.append(
        bench_one("protection_run (m=8, 200k arrivals)",
                  kernels.protection_run, fare_idx, levels)
    )

    counts = rng.multinomial(n, np.full(m, 1.0 / m)).astype(float)
    base = np.sort(rng.uniform(0.0, n, size=m))
    fallback = np.sort(rng.uniform(0.0, n, size=(m, m)), axis=1)
    results.append(
        bench_one("switch_run (m=8, 200k arrivals)",
                  kernels.switch_run,
                  fare_idx, counts, 0, base, fallback, 1.0, 0, 1e-9)
    )

    ladder = core.make_fare_ladder([1.0, 2.0, 3.0, 5.0, 8.0, 13.0], 200)
    advice = core.make_advice(ladder, [10, 20, 30, 40, 50, 50])

    def solve_grid():
        for gamma in np.linspace(0.0, core.bq_bound(ladder), 12):
            lp.optimal_consistency(ladder, advice, float(gamma))

    results.append(bench_one("simplex: 12 LP solves (m=6)", solve_grid, repeats=3))
    return results


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--single", action="store_true",
                        help="benchmark only the current import path and emit JSON")
    args = parser.parse_args(argv)

    if args.single:
        from rmadvice import kernels

        payload = {
            "numba": kernels.HAS_NUMBA,
            "results": run_workloads(),
        }
        print(json.dumps(payload))
        return 0

    rows = {}
    for disable in ("0", "1"):
        env = dict(os.environ, RMADVICE_DISABLE_NUMBA=disable)
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--single"],
            env=env, capture_output=True, text=True, check=True,
        )
        payload = json.loads(out.stdout.strip().splitlines()[-1])
        path = "numba" if payload["numba"] else "fallback"
        for label, seconds in payload["results"]:
            rows.setdefault(label, {})[path] = seconds

    width = max(len(label) for label in rows)
    print(f"{'workload':<{width}}  {'numba':>10}  {'fallback':>10}  {'speedup':>8}")
    for label, row in rows.items():
        speedup = row["fallback"] / row["numba"] if row["numba"] > 0 else float("inf")
        print(f"{label:<{width}}  {row['numba']:>9.4f}s  {row['fallback']:>9.4f}s  "
              f"{speedup:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
