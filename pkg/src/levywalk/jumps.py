"""Jump densities for the underlying integer walk.

A jump density is a finitely supported probability vector on the
integers, symmetric about 0 and nonincreasing away from it (the stay
weight at 0 is exempt, so the simple +-1 walk is admissible).  The
module also carries the two derived constants every limit statement
needs: the mean absolute jump and the jump variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_NORMALIZATION_TOL = 1e-9


class DensityError(ValueError):
    """Base class for jump-density validation failures."""


class NotNormalizedError(DensityError):
    """Weights are not a probability vector (bad total or negative entry)."""


class NotSymmetricError(DensityError):
    pass


class NotHalfMonotoneError(DensityError):
    pass


class ZeroVarianceError(DensityError):
    """All mass at 0: the walk would never move."""


@dataclass(frozen=True, eq=False)
class JumpDensity:
    support: np.ndarray          # int64, ascending, zero-weight entries dropped
    weights: np.ndarray          # float64, sums to exactly 1
    mean_abs: float              # E|jump|
    variance: float              # E jump**2
    stay_weight: float           # mass at 0
    cdf: np.ndarray = field(repr=False)  # cumulative weights, last entry forced to 1
    # finite support keeps absolute moments of every order finite
    max_finite_moment: float = math.inf

    @property
    def max_jump(self) -> int:
        return int(np.abs(self.support).max())

    def weight_at(self, k: int) -> float:
        idx = np.searchsorted(self.support, k)
        if idx < len(self.support) and self.support[idx] == k:
            return float(self.weights[idx])
        return 0.0


def validate(weight_map) -> JumpDensity:
    """Build a JumpDensity from a {offset: weight} mapping.

    Checks, in order: integer offsets, no negative weights, total mass 1
    within 1e-9 (then renormalized exactly), symmetry, tail
    monotonicity for offsets >= 1, and a nonzero mean absolute jump.
    Each failure raises its own DensityError subclass.
    """
    cleaned = {}
    for k, w in weight_map.items():
        ki = int(k)
        if ki != k:
            raise DensityError(f"support offsets must be integers, got {k!r}")
        w = float(w)
        if w < 0.0:
            raise NotNormalizedError(f"weight at offset {ki} is negative: {w}")
        if w > 0.0:
            cleaned[ki] = cleaned.get(ki, 0.0) + w
    total = math.fsum(cleaned.values())
    if abs(total - 1.0) > _NORMALIZATION_TOL:
        raise NotNormalizedError(f"weights sum to {total!r}, expected 1")
    support = np.array(sorted(cleaned), dtype=np.int64)
    weights = np.array([cleaned[k] / total for k in support])
    for k in support:
        if k > 0 and cleaned.get(-int(k)) != cleaned[int(k)]:
            raise NotSymmetricError(
                f"weights at offsets {k} and {-k} differ: "
                f"{cleaned.get(int(k))} vs {cleaned.get(-int(k))}")
    pos = support[support > 0]
    if len(pos):
        kmax = int(pos.max())
        dense = np.zeros(kmax + 1)
        dense[pos] = weights[support > 0]
        # the stay weight is exempt: requiring p(1) <= p(0) would reject
        # the plain +-1 walk, which the rest of the package leans on
        for k in range(1, kmax):
            if dense[k + 1] > dense[k]:
                raise NotHalfMonotoneError(
                    f"weight rises from offset {k} ({dense[k]}) "
                    f"to offset {k + 1} ({dense[k + 1]})")
    mean_abs = 2.0 * float((pos * weights[support > 0]).sum()) if len(pos) else 0.0
    if mean_abs == 0.0:
        raise ZeroVarianceError("all weight at offset 0; the walk cannot move")
    variance = float((support.astype(float) ** 2 * weights).sum())
    cdf = np.cumsum(weights)
    cdf[-1] = 1.0
    return JumpDensity(support=support, weights=weights, mean_abs=mean_abs,
                       variance=variance, stay_weight=float(cleaned.get(0, 0.0) / total),
                       cdf=cdf)


def from_one_sided(pairs) -> JumpDensity:
    """Build a density from (offset, weight) pairs with offset >= 0.

    The negative side is mirrored automatically, which makes symmetry
    hold by construction; each positive offset's weight counts once per
    side, so the total over the mirrored map must come to 1.
    """
    weights: dict[int, float] = {}
    for k, w in pairs:
        ki = int(k)
        if ki != k or ki < 0:
            raise DensityError(f"one-sided offsets must be integers >= 0, got {k!r}")
        if ki in weights:
            raise DensityError(f"offset {ki} listed twice")
        weights[ki] = float(w)
        if ki > 0:
            weights[-ki] = float(w)
    return validate(weights)


def simple_walk_density() -> JumpDensity:
    """The nearest-neighbour walk: +-1 with weight 1/2 each."""
    return validate({-1: 0.5, 1: 0.5})


def lazy_walk_density(stay_weight: float = 0.5) -> JumpDensity:
    """Nearest-neighbour walk that stays put with the given weight."""
    if not 0.0 < stay_weight < 1.0:
        raise DensityError(f"stay weight must be in (0, 1), got {stay_weight}")
    move = 0.5 * (1.0 - stay_weight)
    return validate({-1: move, 0: stay_weight, 1: move})


def remove_lazy(density: JumpDensity) -> tuple[JumpDensity, float]:
    """Condition the density on moving.

    Returns (density', eta) where density' is the law of a jump given
    it is nonzero and eta = 1 / (1 - stay_weight) is the mean number of
    attempts per actual move.  Constants scale as mean_abs' = eta *
    mean_abs and variance' = eta * variance; with no stay weight the
    density is returned unchanged and eta is 1.
    """
    p0 = density.stay_weight
    if p0 == 0.0:
        return density, 1.0
    eta = 1.0 / (1.0 - p0)
    moved = {int(k): float(w) * eta
             for k, w in zip(density.support, density.weights) if k != 0}
    return validate(moved), eta


def sample_jump(density: JumpDensity, gen: np.random.Generator) -> int:
    """Draw one jump, consuming exactly one uniform."""
    u = gen.random()
    return int(density.support[np.searchsorted(density.cdf, u, side="right")])


def sample_jumps(density: JumpDensity, gen: np.random.Generator, n: int) -> np.ndarray:
    """Draw n jumps; entry i equals what the i-th single draw would give."""
    u = gen.random(n)
    return density.support[np.searchsorted(density.cdf, u, side="right")]


def gaussian_abs_moment(q: float, variance: float) -> float:
    """E|Z|**q for Z normal with mean 0 and the given variance."""
    if q < 0:
        raise ValueError(f"moment order must be nonnegative, got {q}")
    return variance ** (q / 2.0) * 2.0 ** (q / 2.0) * math.gamma((q + 1.0) / 2.0) / math.sqrt(math.pi)


@dataclass(frozen=True)
class GaussianMoments:
    """Absolute moments of a centered normal with fixed variance."""

    variance: float

    def __post_init__(self):
        if not self.variance > 0.0:
            raise ValueError(f"variance must be positive, got {self.variance}")

    def moment(self, q: float) -> float:
        return gaussian_abs_moment(q, self.variance)
