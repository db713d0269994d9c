"""Timing comparison of the compiled transform-blend kernel against the
numpy fallback, plus the end-to-end frame cost it feeds into.

Run: python3 benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cartoon25d import kernels


def bench(fn, *args, repeats: int = 200) -> float:
    fn(*args)  # warm up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args(argv)

    if not kernels.HAVE_COMPILED:
        print("compiled extension not built; benchmarking the fallback only")

    rng = np.random.default_rng(0)
    print(f"{'triangles':>10}{'keys':>6}{'numpy (us)':>14}"
          f"{'compiled (us)':>15}{'speedup':>9}")
    for m, k in ((40, 2), (400, 4), (4000, 4), (40000, 6)):
        angles = rng.uniform(-2, 2, (k, m))
        logs = rng.uniform(-0.5, 0.5, (k, m, 3))
        weights = rng.dirichlet(np.ones(k))
        t_pure = bench(kernels.blend_triangle_transforms_pure,
                       angles, logs, weights, repeats=args.repeats)
        if kernels.HAVE_COMPILED:
            t_fast = bench(kernels._compiled.blend_triangle_transforms,
                           angles, logs, weights, repeats=args.repeats)
            out_fast = kernels._compiled.blend_triangle_transforms(
                angles, logs, weights)
            out_pure = kernels.blend_triangle_transforms_pure(
                angles, logs, weights)
            drift = np.abs(out_fast - out_pure).max()
            assert drift < 1e-12, f"implementations disagree by {drift}"
            print(f"{m:>10}{k:>6}{t_pure * 1e6:>14.1f}"
                  f"{t_fast * 1e6:>15.1f}{t_pure / t_fast:>8.1f}x")
        else:
            print(f"{m:>10}{k:>6}{t_pure * 1e6:>14.1f}{'-':>15}{'-':>9}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
