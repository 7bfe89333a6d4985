"""Time the ergodic kernels under the numba and numpy backends.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--grid 65536]

The first numba call per kernel compiles (or loads the on-disk cache); it
is excluded from the timings.
"""
from __future__ import annotations

import argparse
import os
import time

from divsum.coboundary import TrigPoly
from divsum.ergodic import OrbitalSeriesSpec, birkhoff_average, l2_norm_profile, level_set_profile


def _time(fn, repeat):
    fn()  # warm-up / JIT
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--grid", type=int, default=2**16)
    ap.add_argument("--n-max", type=int, default=64)
    args = ap.parse_args()

    spec = OrbitalSeriesSpec(TrigPoly.sin(1) + TrigPoly.cos(2, 0.5), 3)
    ns = list(range(1, args.n_max + 1))
    jobs = {
        "level_set_profile": lambda: level_set_profile(spec, ns, 0.3, grid=args.grid, seed=1),
        "l2_norm_profile": lambda: l2_norm_profile(spec, ns, grid=2**14),
        "birkhoff_average": lambda: birkhoff_average(spec.theta, 3, 10**6, seed=1),
    }
    print(f"{'kernel':<20} {'numba [s]':>10} {'numpy [s]':>10} {'speedup':>8}")
    for name, fn in jobs.items():
        times = {}
        for backend in ("numba", "numpy"):
            os.environ["DIVSUM_BACKEND"] = backend
            times[backend] = _time(fn, args.repeat)
        print(f"{name:<20} {times['numba']:>10.4f} {times['numpy']:>10.4f} {times['numpy'] / times['numba']:>7.1f}x")
    os.environ.pop("DIVSUM_BACKEND", None)


if __name__ == "__main__":
    main()
