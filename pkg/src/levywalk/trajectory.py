"""Walks on targets and their unit-speed continuous-time paths.

A trajectory records the discrete skeleton of one walk: the jump
sequence of the underlying integer walk, the target indices it visits,
their coordinates, and the cumulative travel (collision) times.  The
continuous-time position interpolates between consecutive targets at
unit speed, so travel time equals distance and the collision times are
exactly the partial sums of leg lengths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels


class TimeOutOfRangeError(ValueError):
    """Asked about a time the computed trajectory does not cover."""


@dataclass(frozen=True, eq=False)
class Trajectory:
    jumps: np.ndarray           # int64 (n,), underlying jumps
    positions: np.ndarray       # int64 (n+1,), target indices, starts at 0
    targets_hit: np.ndarray     # float64 (n+1,), coordinates, starts at 0.0
    collision_times: np.ndarray  # float64 (n+1,), nondecreasing, starts at 0.0

    @property
    def n_steps(self) -> int:
        return len(self.jumps)

    @property
    def total_time(self) -> float:
        return float(self.collision_times[-1])

    @classmethod
    def from_jumps(cls, env, jumps) -> "Trajectory":
        """Deterministic replay: build the path for a given jump sequence.

        Collision times are accumulated with the same chained adds as
        the simulation kernels, so a replay of a simulated jump
        sequence reproduces its collision times bit for bit.
        """
        jumps = np.asarray(jumps, dtype=np.int64)
        positions = np.concatenate(([0], np.cumsum(jumps)))
        targets = env.targets_at(positions)
        deltas = np.abs(np.diff(targets))
        times = np.add.accumulate(np.concatenate(((0.0,), deltas)))
        return cls(jumps, positions, targets, times)


def simulate(env, density, gen, *, t_max=None, max_steps=None) -> Trajectory:
    """Run one walk until its travel time exceeds t_max or it has taken
    max_steps steps (whichever bound is given, or the first to trip).

    With t_max > 0 the walk always ends one step past t_max, so the
    continuous-time position is defined on all of [0, t_max].  t_max=0
    asks for no travel at all and returns the origin-only trajectory.
    """
    if t_max is not None and float(t_max) == 0.0:
        z = np.zeros(1)
        return Trajectory(np.zeros(0, dtype=np.int64), np.zeros(1, dtype=np.int64), z, z.copy())
    xi, s, y, tau = kernels.walk_until(env, density, gen, t_max=t_max, max_steps=max_steps)
    return Trajectory(xi, s, y, tau)


def collisions_up_to(traj: Trajectory, t: float) -> int:
    """Number of collisions in [0, t]: largest m with collision time <= t.

    A zero jump produces a zero-length leg and an immediate repeat
    collision; ties therefore all count.
    """
    t = float(t)
    if t < 0.0 or t > traj.total_time:
        raise TimeOutOfRangeError(
            f"t={t} outside the computed range [0, {traj.total_time}]")
    return int(np.searchsorted(traj.collision_times, t, side="right")) - 1


def position_at(traj: Trajectory, t: float) -> float:
    """Continuous-time position at t: at a target when a collision time
    lands exactly on t, otherwise in flight toward the next target."""
    n = collisions_up_to(traj, t)
    tau_n = traj.collision_times[n]
    if t == tau_n:
        return float(traj.targets_hit[n])
    j = traj.jumps[n]   # n < n_steps here: t < total_time and leg n+1 is in flight
    direction = 1.0 if j > 0 else -1.0
    return float(traj.targets_hit[n] + direction * (t - tau_n))


def sample_path(traj: Trajectory, times) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (position, collision count) at each time.

    Times beyond the computed range raise, as in position_at.
    """
    ts = np.asarray(times, dtype=float)
    if ts.size and (ts.min() < 0.0 or ts.max() > traj.total_time):
        raise TimeOutOfRangeError(
            f"times outside the computed range [0, {traj.total_time}]")
    idx = np.searchsorted(traj.collision_times, ts, side="right") - 1
    at_target = ts == traj.collision_times[idx]
    j = traj.jumps[np.minimum(idx, max(traj.n_steps - 1, 0))] if traj.n_steps else np.zeros(len(ts), dtype=np.int64)
    x = traj.targets_hit[idx] + np.where(j > 0, 1.0, -1.0) * (ts - traj.collision_times[idx])
    x = np.where(at_target, traj.targets_hit[idx], x)
    return x, idx.astype(np.int64)


@dataclass(frozen=True)
class WalkerResult:
    """One walker's state read off at a single evaluation time."""
    t_eval: float
    x_value: float
    n_of_t: int
    steps_taken: int


def evaluate(traj: Trajectory, t: float) -> WalkerResult:
    return WalkerResult(t_eval=float(t), x_value=position_at(traj, t),
                        n_of_t=collisions_up_to(traj, t),
                        steps_taken=traj.n_steps)


def strip_lazy(traj: Trajectory) -> Trajectory:
    """Drop zero jumps.

    The walk conditioned on moving traverses the same broken line at
    the same speed, so the stripped trajectory's path is pointwise
    identical; only the collision bookkeeping shrinks.
    """
    keep = traj.jumps != 0
    return Trajectory(
        traj.jumps[keep],
        np.concatenate(([0], traj.positions[1:][keep])),
        np.concatenate(((0.0,), traj.targets_hit[1:][keep])),
        np.concatenate(((0.0,), traj.collision_times[1:][keep])),
    )
