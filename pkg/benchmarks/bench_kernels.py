"""Time the compiled walk kernels against the pure-Python fallback.

Usage:
    python3 benchmarks/bench_kernels.py [--steps N] [--repeats R]

Both backends draw from identically seeded generators, so the timed
work is the same walk step for step; the printed check column confirms
the outputs agree before the ratio is reported.
"""

import argparse
import time

from levywalk.environment import Environment, Pareto
from levywalk.jumps import lazy_walk_density, simple_walk_density
from levywalk.kernels import backend_module, walk_until
from levywalk.rng import substream


def time_backend(impl, density, steps, repeats, master):
    best = float("inf")
    last = None
    for rep in range(repeats):
        env = Environment(Pareto(alpha=1.5, xmin=1.0), 7)
        gen = substream(master, "bench", rep)
        t0 = time.perf_counter()
        jumps, positions, targets, times = walk_until(
            env, density, gen, max_steps=steps, impl=impl)
        best = min(best, time.perf_counter() - t0)
        last = float(times[-1])
    return best, last


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=2_000_000,
                        help="walk steps per timed run (default 2e6)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timed runs per cell, best is kept (default 3)")
    parser.add_argument("--seed", type=int, default=20260816)
    args = parser.parse_args(argv)

    backends = []
    for name in ("cython", "python"):
        try:
            backends.append((name, backend_module(name)))
        except ImportError as exc:
            print(f"{name}: unavailable ({exc})")
    densities = [("srw", simple_walk_density()),
                 ("lazy", lazy_walk_density())]

    print(f"{args.steps} steps per walk, best of {args.repeats}")
    print(f"{'density':<8} {'backend':<8} {'seconds':>9} {'Msteps/s':>9}"
          f" {'path time':>14}")
    for dens_name, density in densities:
        rows = []
        for name, impl in backends:
            secs, path_time = time_backend(impl, density, args.steps,
                                           args.repeats, args.seed)
            rows.append((name, secs, path_time))
            print(f"{dens_name:<8} {name:<8} {secs:>9.3f} "
                  f"{args.steps / secs / 1e6:>9.2f} {path_time:>14.2f}")
        if len(rows) == 2:
            agree = rows[0][2] == rows[1][2]
            ratio = rows[1][1] / rows[0][1]
            print(f"{dens_name:<8} agree: {agree}, python/cython: "
                  f"{ratio:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
