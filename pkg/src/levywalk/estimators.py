"""Estimators and distributional checks for the walk's limit laws.

Conventions: estimates that are plain means are accumulated with
math.fsum, so they are exactly rounded and invariant under sample
permutation; standard errors use the matching compensated variance.
Distributional comparisons report Kolmogorov-Smirnov statistics and
leave thresholds to the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .jumps import gaussian_abs_moment

_SQRT2 = math.sqrt(2.0)


class InsufficientSamplesError(ValueError):
    """Too few samples for the requested estimate to mean anything."""


@dataclass(frozen=True)
class LimitConstants:
    """The three numbers every limit statement is built from."""
    gap_mean: float        # mean inter-target gap
    mean_abs_jump: float   # mean absolute underlying jump
    jump_variance: float   # variance of one underlying jump

    @classmethod
    def from_model(cls, dist, density) -> "LimitConstants":
        return cls(dist.mean, density.mean_abs, density.variance)

    @property
    def mean_leg(self) -> float:
        """Long-run mean leg length; also the collision pace tau(n)/n."""
        return self.mean_abs_jump * self.gap_mean

    @property
    def diffusion_variance(self) -> float:
        """Variance per unit time of the limiting centered normal."""
        return self.gap_mean / self.mean_abs_jump * self.jump_variance

    def moment_target(self, q: float) -> float:
        """Limit of E|X(t)|^q / t^(q/2)."""
        return ((self.gap_mean / self.mean_abs_jump) ** (q / 2.0)
                * gaussian_abs_moment(q, self.jump_variance))


def normal_cdf(x: float, variance: float = 1.0) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0 * variance))


def ks_distance(samples, variance: float) -> float:
    """KS distance between the sample law and a centered normal.

    Samples must already be rescaled (e.g. X(t)/sqrt(t)); the reference
    CDF is evaluated through erfc, good to ~1e-15.
    """
    xs = np.sort(np.asarray(samples, dtype=float))
    n = len(xs)
    if n < 10:
        raise InsufficientSamplesError(f"need >= 10 samples, got {n}")
    if not variance > 0.0:
        raise ValueError(f"variance must be positive, got {variance}")
    sd = math.sqrt(variance)
    cdf = np.array([0.5 * math.erfc(-v / (sd * _SQRT2)) for v in xs])
    d_plus = np.max(np.arange(1, n + 1) / n - cdf)
    d_minus = np.max(cdf - np.arange(0, n) / n)
    return float(max(d_plus, d_minus))


@dataclass(frozen=True)
class CltReport:
    """Distance of rescaled positions from their limiting normal."""
    time: float
    sample_count: int
    ks: float
    target_variance: float


def clt_report(positions, t: float, constants: LimitConstants) -> CltReport:
    """KS of X(t)/sqrt(t) against the predicted diffusive normal."""
    x = np.asarray(positions, dtype=float) / math.sqrt(t)
    var = constants.diffusion_variance
    return CltReport(time=float(t), sample_count=len(x),
                     ks=ks_distance(x, var), target_variance=var)


def ks_two_sample(a, b) -> float:
    """KS distance between two empirical laws."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if len(a) == 0 or len(b) == 0:
        raise ValueError("no samples")
    grid = np.concatenate((a, b))
    fa = np.searchsorted(a, grid, side="right") / len(a)
    fb = np.searchsorted(b, grid, side="right") / len(b)
    return float(np.max(np.abs(fa - fb)))


def _fsum_mean_var(vals: np.ndarray) -> tuple[float, float]:
    n = len(vals)
    mean = math.fsum(vals) / n
    var = math.fsum((vals - mean) ** 2) / (n - 1) if n > 1 else 0.0
    return mean, var


@dataclass(frozen=True)
class MomentReport:
    """One rescaled absolute moment E|X(t)|^q / t^(q/2) with its limit."""
    order: float
    time: float
    estimate: float
    target: float
    std_error: float
    signed_estimate: float | None = None   # E[X^q] / t^(q/2), odd integer q only
    signed_std_error: float | None = None
    signed_target: float | None = None

    @property
    def relative_error(self) -> float:
        return abs(self.estimate / self.target - 1.0)


def rescaled_moment(samples, t: float, q: float,
                    constants: LimitConstants) -> MomentReport:
    """Estimate E|X(t)|^q / t^(q/2) from position samples at time t.

    The reported standard error is the jackknife value, which for a
    plain mean collapses to the classical s/sqrt(n).
    """
    x = np.asarray(samples, dtype=float)
    if len(x) < 2:
        raise InsufficientSamplesError(f"need >= 2 samples, got {len(x)}")
    if not t > 0.0:
        raise ValueError(f"t must be positive, got {t}")
    if q < 0.0:
        raise ValueError(f"moment order must be nonnegative, got {q}")
    scale = float(t) ** (q / 2.0)
    vals = np.abs(x) ** q / scale
    mean, var = _fsum_mean_var(vals)
    se = math.sqrt(var / len(vals))
    signed = (None, None, None)
    if q == int(q) and int(q) % 2 == 1:
        sv = np.sign(x) * np.abs(x) ** q / scale
        smean, svar = _fsum_mean_var(sv)
        signed = (smean, math.sqrt(svar / len(sv)), 0.0)
    return MomentReport(order=q, time=float(t), estimate=mean,
                        target=constants.moment_target(q), std_error=se,
                        signed_estimate=signed[0], signed_std_error=signed[1],
                        signed_target=signed[2])


def moment_series(positions: np.ndarray, times, q: float,
                  constants: LimitConstants) -> list[MomentReport]:
    """rescaled_moment at every column of a (walkers, times) sample array."""
    times = np.asarray(times, dtype=float)
    return [rescaled_moment(positions[:, i], times[i], q, constants)
            for i in range(len(times))]


@dataclass(frozen=True)
class LlnSeries:
    """Collision-pace ratios tau(n)/n along a single walk."""
    step_counts: np.ndarray
    ratios: np.ndarray
    target: float

    @property
    def final_relative_error(self) -> float:
        return abs(float(self.ratios[-1]) / self.target - 1.0)


def lln_series(traj, checkpoints, constants: LimitConstants) -> LlnSeries:
    """Exact tau(n)/n at each checkpoint of one trajectory."""
    cps = np.asarray(sorted(int(c) for c in checkpoints), dtype=np.int64)
    if len(cps) == 0 or cps[0] < 1 or cps[-1] > traj.n_steps:
        raise ValueError(f"checkpoints must lie in [1, {traj.n_steps}]")
    ratios = traj.collision_times[cps] / cps
    return LlnSeries(cps, ratios, constants.mean_leg)


def time_collision_ratio(traj, t: float, constants: LimitConstants) -> tuple[float, float]:
    """(t / collisions in [0, t], its limit).  The inverse pace."""
    from .trajectory import collisions_up_to
    n = collisions_up_to(traj, t)
    if n == 0:
        raise ValueError(f"no collisions by t={t}; ratio undefined")
    return float(t) / n, constants.mean_leg


@dataclass(frozen=True)
class AnnealedMomentReport:
    """Second moment of X(t)/sqrt(t) pooled over environments."""
    time: float
    estimate: float
    target: float
    env_means: np.ndarray
    std_error: float      # between-environment, the honest scale here

    @property
    def ratio_to_target(self) -> float:
        return self.estimate / self.target


def annealed_second_moment(positions_by_env: np.ndarray, t: float,
                           constants: LimitConstants) -> AnnealedMomentReport:
    """positions_by_env has shape (environments, walkers per environment)."""
    e, w = positions_by_env.shape
    if e < 2:
        raise InsufficientSamplesError(
            f"need >= 2 environments for a between-environment scale, got {e}")
    vals = positions_by_env.astype(float) ** 2 / float(t)
    env_means = np.array([math.fsum(row) / w for row in vals])
    estimate = math.fsum(env_means) / e
    var = math.fsum((env_means - estimate) ** 2) / (e - 1)
    return AnnealedMomentReport(time=float(t), estimate=estimate,
                                target=constants.diffusion_variance,
                                env_means=env_means,
                                std_error=math.sqrt(var / e))


# ---------------------------------------------------------------------------
# averaging along spreading weight families


class ConditionViolatedError(ValueError):
    """A weight family fails a hypothesis of the averaging statement."""


def lazy_step_weights(n: int) -> tuple[np.ndarray, np.ndarray]:
    """n-step weights of the half-lazy nearest-neighbour walk.

    These are binomial: weight(j) = C(2n, n+j) / 4^n on the full
    integer window |j| <= n, with no parity holes.  Returned support is
    truncated where the two-sided tail mass falls below ~1e-13; every
    integer inside the kept window is present, so monotonicity away
    from 0 is checkable directly.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    w = min(n, int(math.ceil(7.5 * math.sqrt(n / 2.0))) + 10)
    offsets = np.arange(-w, w + 1, dtype=np.int64)
    lg2n = math.lgamma(2 * n + 1)
    ln4n = 2 * n * math.log(2.0)
    logs = [lg2n - math.lgamma(n + j + 1) - math.lgamma(n - j + 1) - ln4n
            for j in offsets]
    weights = np.exp(logs)
    # renormalize the window: lgamma rounding grows with n and would
    # otherwise masquerade as missing tail mass
    return offsets, weights / math.fsum(weights)


def simple_step_weights(n: int) -> tuple[np.ndarray, np.ndarray]:
    """n-step weights of the simple nearest-neighbour walk.

    weight(j) = C(n, (n+j)/2) / 2^n when j and n share parity, else 0.
    The parity holes mean these are NOT monotone away from the origin,
    so averaging_check rejects this family; it exists for exactly that
    contrast and for central-mass measurements.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    w = min(n, int(math.ceil(7.5 * math.sqrt(n))) + 10)
    offsets = np.arange(-w, w + 1, dtype=np.int64)
    lgn = math.lgamma(n + 1)
    ln2n = n * math.log(2.0)
    weights = np.zeros(len(offsets))
    for i, j in enumerate(offsets):
        if (n + j) % 2 == 0:
            k = (n + j) // 2
            weights[i] = math.exp(lgn - math.lgamma(k + 1) - math.lgamma(n - k + 1) - ln2n)
    return offsets, weights / math.fsum(weights)


def central_mass(family: Callable, n: int, radius: int) -> float:
    """Total weight the n-step family leaves within |j| <= radius."""
    offsets, weights = family(n)
    return float(math.fsum(weights[np.abs(offsets) <= radius]))


@dataclass(frozen=True)
class AveragingProbe:
    """A bounded two-sided sequence with a declared Cesaro mean, paired
    with a spreading weight family to average it against."""
    name: str
    values: Callable[[np.ndarray], np.ndarray]
    cesaro_limit: float
    family: Callable[[int], tuple[np.ndarray, np.ndarray]] = lazy_step_weights


def constant_probe(value: float = 0.7, family=lazy_step_weights) -> AveragingProbe:
    return AveragingProbe("constant", lambda offs: np.full(len(offs), value),
                          value, family)


def alternating_probe(family=lazy_step_weights) -> AveragingProbe:
    return AveragingProbe("alternating",
                          lambda offs: np.where(offs % 2 == 0, 1.0, -1.0),
                          0.0, family)


def harmonic_probe(limit_value: float = 1.0, family=lazy_step_weights) -> AveragingProbe:
    return AveragingProbe("harmonic",
                          lambda offs: limit_value + 1.0 / (1.0 + np.abs(offs)),
                          limit_value, family)


@dataclass(frozen=True)
class AveragingSeries:
    probe_name: str
    n_values: np.ndarray
    estimates: np.ndarray
    limit: float

    @property
    def abs_errors(self) -> np.ndarray:
        return np.abs(self.estimates - self.limit)


def averaging_check(probe: AveragingProbe, n_list,
                    tail_mass: float = 1e-12) -> AveragingSeries:
    """Average the probe against its weight family at each n.

    Validates the two hypotheses the convergence rests on and raises
    ConditionViolatedError naming the failed one: (i) for each n the
    weights are nonincreasing away from the origin over the whole
    integer window, (ii) the central weight vanishes along n_list.
    The returned estimates should drift to the probe's Cesaro mean.
    """
    ns = [int(n) for n in n_list]
    if not ns or any(n < 1 for n in ns) or sorted(ns) != ns:
        raise ValueError("n_list must be increasing positive integers")
    estimates = np.empty(len(ns))
    centers = []
    for i, n in enumerate(ns):
        offsets, weights = probe.family(n)
        if (np.diff(offsets) != 1).any():
            raise ConditionViolatedError(
                f"family window at n={n} skips integers; cannot check shape")
        total = math.fsum(weights)
        # allowance: declared truncation plus lgamma rounding, whose
        # coherent part grows about linearly with n
        mass_tol = 10.0 * tail_mass + 50.0 * np.finfo(float).eps * n
        if abs(total - 1.0) > mass_tol:
            raise ConditionViolatedError(
                f"weights at n={n} sum to {total!r}, beyond the declared "
                f"truncation allowance {mass_tol:g}")
        right = weights[offsets >= 0]
        if (np.diff(right) > right[:-1] * 1e-12).any():
            raise ConditionViolatedError(
                f"weights at n={n} rise away from the origin "
                f"(condition: nonincreasing in |j|)")
        centers.append(float(weights[offsets == 0][0]))
        estimates[i] = math.fsum(weights * probe.values(offsets))
    for a, b in zip(centers, centers[1:]):
        if b > a:
            raise ConditionViolatedError(
                "central weight does not vanish along n_list "
                f"(got {centers})")
    return AveragingSeries(probe.name, np.asarray(ns, dtype=np.int64),
                           estimates, probe.cesaro_limit)
