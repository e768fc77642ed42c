import numpy as np
import pytest

from levywalk.environment import Constant, Environment, Pareto
from levywalk.jumps import lazy_walk_density, simple_walk_density
from levywalk.rng import substream
from levywalk.trajectory import (
    TimeOutOfRangeError,
    Trajectory,
    collisions_up_to,
    evaluate,
    position_at,
    sample_path,
    simulate,
    strip_lazy,
)


@pytest.fixture
def two_leg():
    # gaps 1.5 then 1.0 to the right; jumps +2 then -1:
    # targets visited 0 -> 2.5 -> 1.5, path lengths 2.5 and 1.0
    env = Environment.from_gaps((1.5, 1.0))
    return Trajectory.from_jumps(env, np.array([2, -1], dtype=np.int64))


def test_worked_example_bookkeeping(two_leg):
    assert np.array_equal(two_leg.positions, np.array([0, 2, 1]))
    assert np.allclose(two_leg.targets_hit, np.array([0.0, 2.5, 1.5]))
    assert np.allclose(two_leg.collision_times, np.array([0.0, 2.5, 3.5]))
    assert two_leg.n_steps == 2
    assert two_leg.total_time == 3.5


def test_worked_example_interpolation(two_leg):
    # outbound leg moves right at unit speed, return leg moves left
    assert position_at(two_leg, 0.0) == 0.0
    assert position_at(two_leg, 1.0) == 1.0
    assert position_at(two_leg, 2.5) == 2.5
    assert position_at(two_leg, 3.0) == 2.0
    assert position_at(two_leg, 3.5) == 1.5


def test_worked_example_collision_counts(two_leg):
    assert collisions_up_to(two_leg, 0.0) == 0
    assert collisions_up_to(two_leg, 2.4) == 0
    assert collisions_up_to(two_leg, 2.5) == 1  # count jumps at their instant
    assert collisions_up_to(two_leg, 3.0) == 1
    assert collisions_up_to(two_leg, 3.5) == 2


def test_evaluate_bundles_the_worked_example(two_leg):
    r = evaluate(two_leg, 3.0)
    assert r.t_eval == 3.0
    assert r.x_value == 2.0
    assert r.n_of_t == 1
    assert r.steps_taken == 2


def test_position_beyond_horizon_raises(two_leg):
    with pytest.raises(TimeOutOfRangeError):
        position_at(two_leg, 3.6)
    with pytest.raises(TimeOutOfRangeError):
        position_at(two_leg, -0.1)


def test_sample_path_matches_pointwise_queries():
    env = Environment(Pareto(alpha=1.5, xmin=1.0), 21)
    traj = simulate(env, simple_walk_density(), substream(21, "sp"), t_max=300.0)
    times = np.linspace(0.0, 300.0, 57)
    xs, counts = sample_path(traj, times)
    for t, x, c in zip(times, xs, counts):
        assert x == position_at(traj, float(t))
        assert c == collisions_up_to(traj, float(t))


def test_path_speed_never_exceeds_one():
    env = Environment(Pareto(alpha=1.5, xmin=1.0), 22)
    traj = simulate(env, lazy_walk_density(), substream(22, "sp"), t_max=500.0)
    times = np.linspace(0.0, 500.0, 2001)
    xs, _ = sample_path(traj, times)
    assert np.max(np.abs(np.diff(xs))) <= np.diff(times)[0] + 1e-12


def test_interpolation_passes_through_every_collision():
    env = Environment(Pareto(alpha=1.5, xmin=1.0), 23)
    traj = simulate(env, simple_walk_density(), substream(23, "sp"), max_steps=400)
    for k in range(traj.n_steps + 1):
        t_k = float(traj.collision_times[k])
        assert position_at(traj, t_k) == pytest.approx(traj.targets_hit[k], abs=1e-9)


def test_simulate_with_zero_horizon():
    env = Environment(Constant(1.0), 1)
    traj = simulate(env, simple_walk_density(), substream(1, "z"), t_max=0.0)
    assert traj.n_steps == 0
    assert traj.total_time == 0.0
    assert position_at(traj, 0.0) == 0.0


def test_simulate_requires_a_bound():
    env = Environment(Constant(1.0), 1)
    with pytest.raises(ValueError):
        simulate(env, simple_walk_density(), substream(1, "z"))


def test_from_jumps_replays_a_simulation_exactly():
    env = Environment(Pareto(alpha=1.5, xmin=1.0), 24)
    traj = simulate(env, simple_walk_density(), substream(24, "rp"), max_steps=1000)
    replay = Trajectory.from_jumps(env, traj.jumps)
    assert np.array_equal(replay.positions, traj.positions)
    assert np.array_equal(replay.targets_hit, traj.targets_hit)
    assert np.array_equal(replay.collision_times, traj.collision_times)


def test_strip_lazy_keeps_the_path_and_drops_the_pauses():
    env = Environment(Pareto(alpha=1.5, xmin=1.0), 25)
    traj = simulate(env, lazy_walk_density(), substream(25, "lz"), t_max=400.0)
    slim = strip_lazy(traj)
    assert np.all(slim.jumps != 0)
    assert slim.n_steps == int(np.count_nonzero(traj.jumps))
    assert slim.total_time == traj.total_time
    for t in np.linspace(0.0, 400.0, 101):
        assert position_at(slim, float(t)) == position_at(traj, float(t))


def test_strip_lazy_is_identity_without_lazy_mass():
    env = Environment(Pareto(alpha=1.5, xmin=1.0), 26)
    traj = simulate(env, simple_walk_density(), substream(26, "lz"), max_steps=200)
    slim = strip_lazy(traj)
    assert np.array_equal(slim.jumps, traj.jumps)
    assert np.array_equal(slim.collision_times, traj.collision_times)


def test_time_bound_stops_after_crossing_leg():
    env = Environment(Pareto(alpha=1.5, xmin=1.0), 27)
    traj = simulate(env, simple_walk_density(), substream(27, "tb"), t_max=250.0)
    assert traj.collision_times[-1] >= 250.0
    assert traj.collision_times[-2] < 250.0
