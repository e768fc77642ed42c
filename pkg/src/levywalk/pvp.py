"""The walk seen from the walker: viewpoint dynamics on environments.

Shifting the viewpoint to the target the walker lands on defines a
transformation of (jump stream, environment) whose invariance is what
makes long-run averages converge.  This module exposes that chain
directly: single steps for inspection, compensated Birkhoff sums at
checkpoints, a batched sampler for the one-step observable across
fresh environments, and the expected jump length at a fixed step count
in a fixed environment.

The observable throughout is the length of the leg the chain traverses
next: |target(k') - target(k)| between consecutive viewpoint indices.
Its long-run mean is the mean absolute jump times the mean gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .environment import Environment, GapDistribution
from .jumps import JumpDensity, sample_jump, sample_jumps
from .rng import substream


@dataclass(frozen=True)
class PvpState:
    """Current viewpoint of the chain.

    offset is the target index the walker occupies; after n steps it
    equals the embedded walk's position S_n.  cursor counts consumed
    jumps, so the shift of the jump stream is an O(1) advance rather
    than a copy, and the environment translation is an O(1) offset.
    """
    env: Environment
    offset: int = 0
    cursor: int = 0


def apply_jump(state: PvpState, jump: int) -> tuple[PvpState, float]:
    """Deterministic viewpoint shift by a given jump.

    Returns the new state and the leg length just traversed.
    """
    new_offset = state.offset + int(jump)
    leg = abs(state.env.target(new_offset) - state.env.target(state.offset))
    return PvpState(state.env, new_offset, state.cursor + 1), leg


def viewpoint_step(state: PvpState, density: JumpDensity,
                   gen: np.random.Generator) -> tuple[PvpState, float]:
    """One random step of the viewpoint chain (one uniform consumed)."""
    return apply_jump(state, sample_jump(density, gen))


@dataclass(frozen=True)
class BirkhoffSeries:
    """Running averages of the leg-length observable at checkpoints."""
    steps: np.ndarray        # int64, increasing
    averages: np.ndarray     # float64
    target: float | None     # mean_abs * mean gap, None for replay environments

    @property
    def final(self) -> float:
        return float(self.averages[-1])

    @property
    def final_relative_error(self) -> float:
        if self.target is None:
            raise ValueError("series has no target to compare against")
        return abs(self.final / self.target - 1.0)


def birkhoff_average(env: Environment, density: JumpDensity,
                     gen: np.random.Generator, n_steps: int,
                     checkpoints=None) -> BirkhoffSeries:
    """Run the viewpoint chain n_steps steps and average the observable.

    Sums are compensated, so the averages are stable even over millions
    of heavy-tailed legs.  Default checkpoints are a geometric ladder
    ending at n_steps.
    """
    n_steps = int(n_steps)
    if n_steps < 1:
        raise ValueError(f"n_steps must be positive, got {n_steps}")
    if checkpoints is None:
        cps = sorted({max(1, n_steps >> k) for k in range(8)} | {n_steps})
    else:
        cps = sorted(int(c) for c in checkpoints)
        if not cps or cps[0] < 1 or cps[-1] > n_steps:
            raise ValueError("checkpoints must lie in [1, n_steps]")
    sums, _ = kernels.chain_sums(env, density, gen, cps)
    steps = np.asarray(cps, dtype=np.int64)
    target = None if env.dist is None else density.mean_abs * env.dist.mean
    return BirkhoffSeries(steps, sums / steps, target)


def stationarity_samples(dist: GapDistribution, density: JumpDensity,
                         chains: int, steps: int, master_seed: int):
    """Leg length at step 1 versus step `steps`, each chain on a fresh
    environment.

    If the shifted viewpoint preserves the law of (jumps, environment),
    the two returned arrays are draws from the same distribution; a
    two-sample comparison of them is the finite-sample witness.
    """
    chains = int(chains)
    steps = int(steps)
    if chains < 1 or steps < 2:
        raise ValueError("need chains >= 1 and steps >= 2")
    jumps = sample_jumps(density, substream(master_seed, "pvp-jumps"),
                         chains * steps).reshape(chains, steps)
    spos = np.cumsum(jumps, axis=1)
    kmax = density.max_jump * steps
    right = dist.sample_array(substream(master_seed, "pvp-gaps-right"),
                              chains * kmax).reshape(chains, kmax)
    left = dist.sample_array(substream(master_seed, "pvp-gaps-left"),
                             chains * kmax).reshape(chains, kmax)
    coords = np.empty((chains, 2 * kmax + 1))
    coords[:, kmax] = 0.0
    coords[:, kmax + 1:] = np.cumsum(right, axis=1)
    coords[:, :kmax] = -np.cumsum(left, axis=1)[:, ::-1]
    rows = np.arange(chains)
    first = np.abs(coords[rows, kmax + spos[:, 0]])
    last = np.abs(coords[rows, kmax + spos[:, -1]] - coords[rows, kmax + spos[:, -2]])
    return first, last


@dataclass(frozen=True)
class JumpLengthSeries:
    """Mean leg length after n steps, for several n, in one environment."""
    step_counts: np.ndarray
    estimates: np.ndarray
    std_errors: np.ndarray
    target: float | None
    walkers: int


def jump_length_expectation_series(env: Environment, density: JumpDensity,
                                   n_list, walkers: int, master_seed: int,
                                   role: str = "jump-length") -> JumpLengthSeries:
    """Monte Carlo E|leg after step n| over fresh walkers in a fixed
    environment, one independent substream per n.

    At n=0 this is just the mean distance to the first target hit.
    The series drifts toward mean_abs * mean gap as the walk forgets
    the atypically pinned origin.
    """
    walkers = int(walkers)
    ns = [int(n) for n in n_list]
    if walkers < 2 or not ns or any(n < 0 for n in ns):
        raise ValueError("need walkers >= 2 and nonnegative step counts")
    estimates = np.empty(len(ns))
    errors = np.empty(len(ns))
    for i, n in enumerate(ns):
        gen = substream(master_seed, role, i)
        obs = kernels.final_jump_lengths(env, density, gen, n, walkers)
        mean = math.fsum(obs) / walkers
        var = math.fsum((obs - mean) ** 2) / (walkers - 1)
        estimates[i] = mean
        errors[i] = math.sqrt(var / walkers)
    target = None if env.dist is None else density.mean_abs * env.dist.mean
    return JumpLengthSeries(np.asarray(ns, dtype=np.int64), estimates, errors,
                            target, walkers)
