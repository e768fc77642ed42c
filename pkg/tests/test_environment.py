import numpy as np
import pytest

from levywalk.environment import (
    Constant,
    Environment,
    EnvironmentCapError,
    EnvironmentFrozenError,
    Exponential,
    Pareto,
    UniformInterval,
    gap_mean,
)
from levywalk.rng import substream


def test_from_gaps_worked_example():
    env = Environment.from_gaps((1.5, 1.0), left_gaps=(0.5,))
    assert env.target(0) == 0.0
    assert env.target(1) == 1.5
    assert env.target(2) == 2.5
    assert env.target(-1) == -0.5


def test_origin_is_always_a_target():
    env = Environment(Pareto(alpha=1.5, xmin=1.0), seed=4)
    assert env.target(0) == 0.0


def test_gaps_are_positive_and_respect_support():
    env = Environment(Pareto(alpha=1.5, xmin=1.0), seed=11)
    env.ensure_span(-200, 200)
    for k in range(-199, 200):
        assert env.gap(k) >= 1.0  # Pareto xmin
    env2 = Environment(UniformInterval(0.5, 1.5), seed=11)
    env2.ensure_span(-50, 50)
    gaps = np.diff(env2.targets_at(np.arange(-50, 51)))
    assert gaps.min() >= 0.5 and gaps.max() <= 1.5


def test_growth_pattern_does_not_change_coordinates():
    # the same seed must give the same environment no matter how it is
    # explored; anything else breaks quenched reproducibility
    a = Environment(Exponential(1.0), seed=9)
    a.ensure_span(-1000, 1000)
    b = Environment(Exponential(1.0), seed=9)
    for k in (3, -7, 40, -200, 999, -1000, 1000):
        b.ensure_index(k)
    ks = np.array([3, -7, 40, -200, 999, -1000, 1000])
    assert np.array_equal(a.targets_at(ks), b.targets_at(ks))


def test_targets_at_auto_extends():
    env = Environment(Constant(2.0), seed=1)
    got = env.targets_at(np.array([-3, 0, 5]))
    assert np.array_equal(got, np.array([-6.0, 0.0, 10.0]))


def test_left_side_is_decreasing():
    env = Environment(Pareto(alpha=1.5, xmin=1.0), seed=2)
    env.ensure_span(-100, 0)
    coords = env.targets_at(np.arange(-100, 1))
    assert np.all(np.diff(coords) > 0)
    assert coords[0] < 0.0


def test_index_cap_is_enforced():
    env = Environment(Constant(1.0), seed=1, cap=100)
    env.ensure_index(100)
    with pytest.raises(EnvironmentCapError):
        env.ensure_index(101)


def test_freeze_blocks_growth_but_not_reads():
    env = Environment(Constant(1.0), seed=1)
    env.ensure_span(-5, 5)
    env.freeze()
    assert env.target(5) == 5.0
    edge = env.span[1]  # growth happens in chunks, probe past them
    with pytest.raises(EnvironmentFrozenError):
        env.ensure_index(edge + 1)


def test_replayed_environment_cannot_be_extended():
    env = Environment.from_gaps((1.0, 2.0))
    assert env.target(2) == 3.0
    with pytest.raises(EnvironmentCapError):
        env.target(3)


def test_target_slope_matches_mean_gap():
    # LLN for the point process itself: omega_n / n -> mu
    n = 200_000
    env = Environment(Exponential(2.0), seed=5)
    assert abs(env.target(n) / n - 0.5) < 0.01
    env_p = Environment(Pareto(alpha=1.5, xmin=1.0), seed=5)
    m = 1_000_000
    assert abs(env_p.target(m) / m - 3.0) / 3.0 < 0.05


def test_gap_mean_values():
    assert gap_mean(Constant(2.5)) == 2.5
    assert gap_mean(Exponential(4.0)) == 0.25
    assert gap_mean(Pareto(alpha=1.5, xmin=1.0)) == 3.0
    assert gap_mean(UniformInterval(0.5, 1.5)) == 1.0


def test_sample_means_agree_with_declared_means():
    gen = substream(77, "gap-check")
    for dist, tol in ((Exponential(1.0), 0.02),
                      (UniformInterval(0.5, 1.5), 0.01),
                      (Pareto(alpha=1.5, xmin=1.0), 0.10)):
        draws = dist.sample_array(gen, 100_000)
        assert abs(draws.mean() / dist.mean - 1.0) < tol


def test_quantile_round_trip():
    dist = Pareto(alpha=1.5, xmin=1.0)
    assert dist.quantile(0.0) == 1.0
    assert dist.quantile(0.75) == pytest.approx(4.0 ** (1 / 1.5))
    ex = Exponential(2.0)
    assert ex.quantile(1.0 - np.exp(-1.0)) == pytest.approx(0.5)


def test_parameter_validation():
    for bad in (lambda: Pareto(alpha=1.0, xmin=1.0),
                lambda: Pareto(alpha=1.5, xmin=0.0),
                lambda: Exponential(0.0),
                lambda: Constant(-1.0),
                lambda: UniformInterval(1.5, 0.5),
                lambda: UniformInterval(0.0, 1.0)):
        with pytest.raises(ValueError):
            bad()
