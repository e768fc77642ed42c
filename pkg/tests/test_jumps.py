import math

import numpy as np
import pytest

from levywalk.jumps import (
    GaussianMoments,
    NotHalfMonotoneError,
    NotNormalizedError,
    NotSymmetricError,
    ZeroVarianceError,
    from_one_sided,
    gaussian_abs_moment,
    lazy_walk_density,
    remove_lazy,
    sample_jumps,
    simple_walk_density,
    validate,
)
from levywalk.rng import substream


def test_simple_walk_constants():
    d = simple_walk_density()
    assert d.mean_abs == 1.0
    assert d.variance == 1.0
    assert d.stay_weight == 0.0
    assert d.max_jump == 1
    assert d.weight_at(1) == 0.5
    assert d.weight_at(-1) == 0.5
    assert d.weight_at(0) == 0.0
    assert d.weight_at(7) == 0.0


def test_lazy_walk_constants():
    d = lazy_walk_density()
    assert d.stay_weight == 0.5
    assert d.mean_abs == 0.5
    assert d.variance == 0.5


def test_five_point_density_and_lazy_removal():
    # weights 0.4 at 0, 0.2 at +-1, 0.1 at +-2
    d = from_one_sided([(0, 0.4), (1, 0.2), (2, 0.1)])
    assert d.stay_weight == pytest.approx(0.4)
    assert d.mean_abs == pytest.approx(0.8)
    assert d.variance == pytest.approx(1.2)

    stripped, eta = remove_lazy(d)
    assert eta == pytest.approx(5.0 / 3.0)  # 1 / (1 - 0.4)
    assert stripped.stay_weight == 0.0
    # the lazy-removal identities: both constants scale by eta
    assert stripped.mean_abs == pytest.approx(eta * d.mean_abs)
    assert stripped.variance == pytest.approx(eta * d.variance)


def test_remove_lazy_on_lazy_srw_gives_srw():
    stripped, eta = remove_lazy(lazy_walk_density())
    assert eta == pytest.approx(2.0)
    assert stripped.mean_abs == 1.0
    assert np.array_equal(stripped.support, np.array([-1, 1]))


def test_validate_rejects_bad_weight_maps():
    with pytest.raises(NotNormalizedError):
        validate({-1: 0.4, 1: 0.4})
    with pytest.raises(NotSymmetricError):
        validate({-1: 0.6, 1: 0.4})
    with pytest.raises(NotHalfMonotoneError):
        # mass rising away from the origin on the positive side
        validate({-2: 0.4, -1: 0.1, 1: 0.1, 2: 0.4})
    with pytest.raises(ZeroVarianceError):
        validate({0: 1.0})


def test_validate_accepts_weight_map_input():
    d = validate({-1: 0.25, 0: 0.5, 1: 0.25})
    assert d.stay_weight == 0.5
    assert d.variance == 0.5


def test_gaussian_abs_moments_against_closed_forms():
    v = 3.0
    assert gaussian_abs_moment(2, v) == pytest.approx(v)
    assert gaussian_abs_moment(4, v) == pytest.approx(3.0 * v * v)
    assert gaussian_abs_moment(1, v) == pytest.approx(math.sqrt(2.0 * v / math.pi))
    assert gaussian_abs_moment(3, v) == pytest.approx(
        2.0 * math.sqrt(2.0 / math.pi) * v ** 1.5)
    assert gaussian_abs_moment(0, v) == 1.0


def test_gaussian_moments_helper_matches_function():
    gm = GaussianMoments(variance=2.0)
    for q in (1, 2, 3, 4):
        assert gm.moment(q) == pytest.approx(gaussian_abs_moment(q, 2.0))


def test_sampling_frequencies_match_weights():
    d = from_one_sided([(0, 0.4), (1, 0.2), (2, 0.1)])
    n = 200_000
    draws = sample_jumps(d, substream(31, "freq"), n)
    for k, p in ((-2, 0.1), (-1, 0.2), (0, 0.4), (1, 0.2), (2, 0.1)):
        freq = np.count_nonzero(draws == k) / n
        # 5 sigma multinomial band
        assert abs(freq - p) < 5.0 * math.sqrt(p * (1 - p) / n)


def test_long_stream_mean_and_variance():
    d = simple_walk_density()
    n = 1_000_000
    draws = sample_jumps(d, substream(32, "lln"), n).astype(float)
    assert abs(draws.mean()) < 5.0 / math.sqrt(n)
    assert abs(draws.var() - d.variance) < 0.005
