import math

import numpy as np
import pytest

from levywalk.environment import Constant, Environment, Exponential, Pareto
from levywalk.estimators import ks_two_sample
from levywalk.jumps import lazy_walk_density, sample_jumps, simple_walk_density
from levywalk.pvp import (
    PvpState,
    apply_jump,
    birkhoff_average,
    jump_length_expectation_series,
    stationarity_samples,
    viewpoint_step,
)
from levywalk.rng import substream
from levywalk.trajectory import simulate


def test_apply_jump_worked_examples():
    lattice = PvpState(Environment(Constant(1.0), 1))
    moved, leg = apply_jump(lattice, 3)
    assert leg == 3.0
    assert moved.offset == 3 and moved.cursor == 1

    _, pause = apply_jump(lattice, 0)
    assert pause == 0.0

    state = PvpState(Environment.from_gaps((1.5, 1.0)))
    _, first = apply_jump(state, 2)
    assert first == 2.5


def test_viewpoint_offset_tracks_the_embedded_walk():
    density = lazy_walk_density()
    jumps = sample_jumps(density, substream(41, "vp"), 300)
    state = PvpState(Environment(Exponential(1.0), 41))
    total = 0.0
    for j in jumps:
        state, leg = apply_jump(state, int(j))
        total += leg
    assert state.offset == int(jumps.sum())
    assert state.cursor == 300
    # legs add up to the trajectory clock of the same jump sequence
    from levywalk.trajectory import Trajectory
    traj = Trajectory.from_jumps(Environment(Exponential(1.0), 41),
                                 jumps.astype(np.int64))
    assert total == pytest.approx(traj.total_time, rel=1e-12)


def test_viewpoint_step_consumes_one_uniform():
    env = Environment(Exponential(1.0), 42)
    gen = substream(42, "vp")
    jump_gen = substream(42, "vp")
    expected = sample_jumps(simple_walk_density(), jump_gen, 5)
    state = PvpState(env)
    for j in expected:
        state, _ = viewpoint_step(state, simple_walk_density(), gen)
    assert state.offset == int(expected.sum())


def test_birkhoff_average_equals_trajectory_leg_mean():
    # same generator, same environment seed: the chain and the walk
    # consume uniforms identically, so the routes must agree exactly
    n = 5000
    dist = Pareto(alpha=1.5, xmin=1.0)
    series = birkhoff_average(Environment(dist, 43), simple_walk_density(),
                              substream(43, "bk"), n)
    traj = simulate(Environment(dist, 43), simple_walk_density(),
                    substream(43, "bk"), max_steps=n)
    legs = np.abs(np.diff(traj.targets_hit))
    assert series.final == pytest.approx(math.fsum(legs.tolist()) / n, rel=1e-14)


def test_birkhoff_checkpoint_ladder():
    series = birkhoff_average(Environment(Exponential(1.0), 44),
                              simple_walk_density(), substream(44, "bk"), 1024)
    assert list(series.steps) == sorted(set(series.steps))
    assert series.steps[-1] == 1024
    assert len(series.averages) == len(series.steps)
    assert series.target == 1.0


def test_birkhoff_single_step():
    env = Environment(Constant(2.0), 1)
    series = birkhoff_average(env, simple_walk_density(), substream(1, "bk"), 1)
    assert series.final == 2.0  # one leg on the 2-lattice


def test_stationarity_samples_are_deterministic_and_stationary():
    dist = Pareto(alpha=1.5, xmin=1.0)
    first, last = stationarity_samples(dist, simple_walk_density(),
                                       chains=20_000, steps=10, master_seed=45)
    again_first, again_last = stationarity_samples(dist, simple_walk_density(),
                                                   chains=20_000, steps=10,
                                                   master_seed=45)
    assert np.array_equal(first, again_first)
    assert np.array_equal(last, again_last)
    assert first.shape == (20_000,)
    # the observable's law does not move along the chain
    assert ks_two_sample(first, last) < 0.03


def test_stationarity_samples_validate_arguments():
    with pytest.raises(ValueError):
        stationarity_samples(Exponential(1.0), simple_walk_density(),
                             chains=10, steps=1, master_seed=1)
    with pytest.raises(ValueError):
        stationarity_samples(Exponential(1.0), simple_walk_density(),
                             chains=0, steps=5, master_seed=1)


def test_jump_length_series_is_exact_on_the_unit_lattice():
    series = jump_length_expectation_series(
        Environment(Constant(1.0), 1), simple_walk_density(),
        (10, 100), 200, 46)
    assert np.array_equal(series.estimates, np.ones(2))
    assert np.array_equal(series.std_errors, np.zeros(2))
    assert series.target == 1.0


def test_jump_length_series_shape_and_determinism():
    env = Environment(Pareto(alpha=1.5, xmin=1.0), 47)
    a = jump_length_expectation_series(env, simple_walk_density(),
                                       (10, 50, 100), 500, 47)
    b = jump_length_expectation_series(Environment(Pareto(alpha=1.5, xmin=1.0), 47),
                                       simple_walk_density(), (10, 50, 100), 500, 47)
    assert np.array_equal(a.estimates, b.estimates)
    assert a.walkers == 500
    assert list(a.step_counts) == [10, 50, 100]
