"""Walker ensembles over shared or freshly drawn environments.

The collection helpers fan independent walkers out over worker
processes.  Every walker owns a counter-based substream keyed by its
id, and every worker rebuilds the environment deterministically from
its seed, so the numbers do not depend on how the work was sliced or
which process ran which slice.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .environment import Environment, GapDistribution
from .jumps import JumpDensity
from .rng import seed_sequence, substream
from .trajectory import collisions_up_to, position_at, sample_path, simulate


def time_grid(t_max: float, points: int) -> np.ndarray:
    """Geometric evaluation grid ending at ``t_max``.

    Consecutive nodes differ by a factor of two, so ``points=4`` gives
    ``t/8, t/4, t/2, t``.
    """
    if t_max <= 0.0:
        raise ValueError("t_max must be positive")
    if points < 1:
        raise ValueError("need at least one grid point")
    return np.array([t_max * 2.0 ** -(points - 1 - i) for i in range(points)])


@dataclass(frozen=True)
class SampleBatch:
    """Ensemble of walkers evaluated on a common time grid.

    ``positions[w, i]`` is walker ``w`` at ``times[i]``;
    ``collisions[w, i]`` counts the collisions completed by then,
    and ``steps[w]`` the committed steps of the whole trajectory.
    """

    times: np.ndarray
    positions: np.ndarray
    collisions: np.ndarray
    steps: np.ndarray
    env_seed: int
    master_seed: int

    @property
    def walker_count(self) -> int:
        return int(self.positions.shape[0])

    def final_positions(self) -> np.ndarray:
        return self.positions[:, -1]


@dataclass(frozen=True)
class AnnealedBatch:
    """Final positions from independent environments.

    ``positions[e, w]`` is walker ``w`` in environment ``e`` at
    ``t_max`` and ``collisions[e, w]`` its completed-leg count; each
    row drew a fresh environment.
    """

    t_max: float
    positions: np.ndarray
    collisions: np.ndarray
    master_seed: int

    def pooled(self) -> np.ndarray:
        return self.positions.reshape(-1)


def _split(count: int, threads: int) -> list[tuple[int, int]]:
    """Contiguous index ranges covering ``range(count)``."""
    if count < 1:
        raise ValueError("need at least one unit of work")
    blocks = 1 if threads <= 1 else min(count, threads * 4)
    edges = np.linspace(0, count, blocks + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _quenched_block(args):
    dist, density, env_seed, master_seed, times, lo, hi = args
    env = Environment(dist, env_seed)
    t_max = float(times[-1])
    pos = np.empty((hi - lo, times.size))
    hits = np.empty((hi - lo, times.size), dtype=np.int64)
    steps = np.empty(hi - lo, dtype=np.int64)
    for wid in range(lo, hi):
        gen = substream(master_seed, "walker", wid)
        traj = simulate(env, density, gen, t_max=t_max)
        x, counts = sample_path(traj, times)
        pos[wid - lo] = x
        hits[wid - lo] = counts
        steps[wid - lo] = traj.n_steps
    return lo, pos, hits, steps


def _run_blocks(worker, args, threads: int) -> list:
    if threads <= 1 or len(args) == 1:
        parts = [worker(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(worker, args))
    parts.sort(key=lambda p: p[0])
    return parts


def collect_quenched(
    dist: GapDistribution,
    density: JumpDensity,
    times,
    walkers: int,
    master_seed: int,
    *,
    env_seed: int | None = None,
    threads: int = 1,
) -> SampleBatch:
    """Run ``walkers`` independent walkers in one shared environment.

    The environment is rebuilt from ``env_seed`` (default: the master
    seed) inside each worker, and walker ``w`` always consumes the
    substream keyed by ``("walker", w)``, so the batch is a pure
    function of the two seeds.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1d array")
    if times[0] <= 0.0 or np.any(np.diff(times) <= 0.0):
        raise ValueError("times must be positive and strictly increasing")
    if env_seed is None:
        env_seed = master_seed
    args = [
        (dist, density, int(env_seed), int(master_seed), times, lo, hi)
        for lo, hi in _split(walkers, threads)
    ]
    parts = _run_blocks(_quenched_block, args, threads)
    return SampleBatch(
        times=times,
        positions=np.concatenate([p[1] for p in parts]),
        collisions=np.concatenate([p[2] for p in parts]),
        steps=np.concatenate([p[3] for p in parts]),
        env_seed=int(env_seed),
        master_seed=int(master_seed),
    )


def environment_seed(master_seed: int, index: int) -> int:
    """Seed of the ``index``-th environment in an annealed batch."""
    seq = seed_sequence(master_seed, "annealed-env", index)
    return int(seq.generate_state(1, np.uint64)[0])


def _annealed_block(args):
    dist, density, master_seed, t_max, walkers, lo, hi = args
    pos = np.empty((hi - lo, walkers))
    hits = np.empty((hi - lo, walkers), dtype=np.int64)
    for e in range(lo, hi):
        env = Environment(dist, environment_seed(master_seed, e))
        for w in range(walkers):
            gen = substream(master_seed, "annealed-walker", e, w)
            traj = simulate(env, density, gen, t_max=t_max)
            pos[e - lo, w] = position_at(traj, t_max)
            hits[e - lo, w] = collisions_up_to(traj, t_max)
    return lo, pos, hits


def collect_annealed(
    dist: GapDistribution,
    density: JumpDensity,
    t_max: float,
    environments: int,
    walkers: int,
    master_seed: int,
    *,
    threads: int = 1,
) -> AnnealedBatch:
    """Final positions over ``environments`` fresh environments.

    Each environment draws its own gap sequence from a seed derived
    from the master seed and the environment index, then hosts
    ``walkers`` independent walkers run to ``t_max``.
    """
    if t_max <= 0.0:
        raise ValueError("t_max must be positive")
    if walkers < 1:
        raise ValueError("need at least one walker per environment")
    args = [
        (dist, density, int(master_seed), float(t_max), int(walkers), lo, hi)
        for lo, hi in _split(environments, threads)
    ]
    parts = _run_blocks(_annealed_block, args, threads)
    return AnnealedBatch(
        t_max=float(t_max),
        positions=np.concatenate([p[1] for p in parts]),
        collisions=np.concatenate([p[2] for p in parts]),
        master_seed=int(master_seed),
    )
