"""Scatterer environments: random point processes on the line.

An environment is a doubly infinite strictly increasing sequence of
target coordinates with a point pinned at the origin.  Consecutive
targets are separated by positive i.i.d. gaps whose law may have a
heavy tail, so the process is materialized lazily: coordinates exist
only out to the largest index queried so far, and both sides grow
independently on demand.

Determinism contract: target(k) is a pure function of (seed, gap law,
k).  Two environments built from equal seed and law agree on every
coordinate no matter in which order or in which chunks the sides were
extended.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import substream

# random() yields multiples of 2**-53 in [0, 1); clamping the single
# zero value up to the next representable draw keeps inverse-CDF gap
# samplers strictly positive and finite.
_MIN_UNIFORM = 2.0 ** -53

DEFAULT_INDEX_CAP = 100_000_000


class EnvironmentCapError(RuntimeError):
    """Materializing an index would exceed the configured cap."""


class EnvironmentFrozenError(RuntimeError):
    """A frozen environment was asked to materialize new targets."""


class GapDistribution:
    """Law of a single positive inter-target gap."""

    @property
    def mean(self) -> float:
        raise NotImplementedError

    def sample_array(self, gen: np.random.Generator, n: int) -> np.ndarray:
        """Draw n gaps, consuming the generator in a chunk-size-free way."""
        raise NotImplementedError

    def quantile(self, v: float) -> float:
        """Inverse CDF at v in [0, 1)."""
        raise NotImplementedError


@dataclass(frozen=True)
class Pareto(GapDistribution):
    """Power-law gap with survival function (xmin/x)**alpha for x >= xmin.

    alpha in (1, 2] gives a finite mean but infinite variance, the
    regime where the environment's long gaps matter most.
    """

    alpha: float
    xmin: float = 1.0

    def __post_init__(self):
        if not self.alpha > 1.0:
            raise ValueError(f"alpha must exceed 1 for a finite mean gap, got {self.alpha}")
        if not self.xmin > 0.0:
            raise ValueError(f"xmin must be positive, got {self.xmin}")

    @property
    def mean(self) -> float:
        return self.alpha * self.xmin / (self.alpha - 1.0)

    def sample_array(self, gen, n):
        u = np.maximum(gen.random(n), _MIN_UNIFORM)
        return self.xmin * u ** (-1.0 / self.alpha)

    def quantile(self, v):
        return self.xmin * (1.0 - v) ** (-1.0 / self.alpha)


@dataclass(frozen=True)
class Exponential(GapDistribution):
    rate: float

    def __post_init__(self):
        if not self.rate > 0.0:
            raise ValueError(f"rate must be positive, got {self.rate}")

    @property
    def mean(self) -> float:
        return 1.0 / self.rate

    def sample_array(self, gen, n):
        # survival form -ln(U)/rate: strictly positive for U in (0, 1]
        u = np.maximum(gen.random(n), _MIN_UNIFORM)
        return -np.log(u) / self.rate

    def quantile(self, v):
        return -math.log1p(-v) / self.rate


@dataclass(frozen=True)
class Constant(GapDistribution):
    """Degenerate gap: an evenly spaced lattice of targets."""

    value: float

    def __post_init__(self):
        if not self.value > 0.0:
            raise ValueError(f"gap value must be positive, got {self.value}")

    @property
    def mean(self) -> float:
        return self.value

    def sample_array(self, gen, n):
        # consumes no randomness; the lattice is deterministic
        return np.full(n, self.value)

    def quantile(self, v):
        return self.value


@dataclass(frozen=True)
class UniformInterval(GapDistribution):
    """Gap uniform on [lo, hi) with 0 < lo <= hi."""

    lo: float
    hi: float

    def __post_init__(self):
        if not 0.0 < self.lo <= self.hi:
            raise ValueError(f"need 0 < lo <= hi, got lo={self.lo} hi={self.hi}")

    @property
    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def sample_array(self, gen, n):
        return self.lo + (self.hi - self.lo) * gen.random(n)

    def quantile(self, v):
        return self.lo + (self.hi - self.lo) * v


def sample_gap(dist: GapDistribution, gen: np.random.Generator) -> float:
    """One gap draw; equals the first entry of a batched draw."""
    return float(dist.sample_array(gen, 1)[0])


def gap_mean(dist: GapDistribution) -> float:
    return dist.mean


class Environment:
    """Lazily materialized two-sided target sequence with target(0) == 0.

    The two sides draw from independent substreams of the environment
    seed, so extending one side never perturbs the other.  Extension
    appends whole blocks of gaps but computes coordinates by sequential
    accumulation, which keeps target(k) independent of block sizes.
    """

    def __init__(self, dist: GapDistribution, seed: int, cap: int = DEFAULT_INDEX_CAP):
        if cap < 1:
            raise ValueError(f"cap must be at least 1, got {cap}")
        self.dist = dist
        self.seed = seed
        self.cap = int(cap)
        self._gen_right = substream(seed, "env-gaps-right")
        self._gen_left = substream(seed, "env-gaps-left")
        self._right = np.empty(0)   # coords of targets 1..R, increasing
        self._left = np.empty(0)    # coords of targets -1..-L, decreasing
        self._frozen = False
        self._coords = None         # cached combined view

    @classmethod
    def from_gaps(cls, right_gaps, left_gaps=()) -> "Environment":
        """Fixed environment replaying the given gap values.

        right_gaps[j] separates targets j and j+1; left_gaps[j]
        separates targets -j and -(j+1).  No generator is attached, so
        walking past the replayed span raises EnvironmentCapError.
        """
        right = np.asarray(right_gaps, dtype=float)
        left = np.asarray(left_gaps, dtype=float)
        if (right <= 0).any() or (left <= 0).any():
            raise ValueError("replayed gaps must all be positive")
        env = cls.__new__(cls)
        env.dist = None
        env.seed = None
        env.cap = max(len(right), len(left))
        env._gen_right = None
        env._gen_left = None
        env._right = np.add.accumulate(right) if len(right) else np.empty(0)
        env._left = -np.add.accumulate(left) if len(left) else np.empty(0)
        env._frozen = True
        env._coords = None
        return env

    @property
    def right_count(self) -> int:
        return len(self._right)

    @property
    def left_count(self) -> int:
        return len(self._left)

    @property
    def span(self) -> tuple[int, int]:
        """Materialized index range (lo, hi), both inclusive."""
        return (-len(self._left), len(self._right))

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> None:
        """Forbid further extension; queries inside the span still work."""
        self._frozen = True

    def _grow_right(self, upto: int) -> None:
        have = len(self._right)
        want = min(self.cap, max(upto, math.ceil(have * 1.6) + 64))
        if self._frozen:
            if self._gen_right is None:
                raise EnvironmentCapError(
                    f"replayed environment covers targets up to {have}, "
                    f"cannot materialize {upto}")
            raise EnvironmentFrozenError(
                f"environment is frozen at right span {have}, cannot reach {upto}")
        gaps = self.dist.sample_array(self._gen_right, want - have)
        last = self._right[-1] if have else 0.0
        block = np.add.accumulate(np.concatenate(([last], gaps)))[1:]
        self._right = np.concatenate((self._right, block))
        self._coords = None

    def _grow_left(self, upto: int) -> None:
        have = len(self._left)
        want = min(self.cap, max(upto, math.ceil(have * 1.6) + 64))
        if self._frozen:
            if self._gen_left is None:
                raise EnvironmentCapError(
                    f"replayed environment covers targets down to {-have}, "
                    f"cannot materialize {-upto}")
            raise EnvironmentFrozenError(
                f"environment is frozen at left span {have}, cannot reach {upto}")
        gaps = self.dist.sample_array(self._gen_left, want - have)
        last = self._left[-1] if have else 0.0
        block = np.add.accumulate(np.concatenate(([last], -gaps)))[1:]
        self._left = np.concatenate((self._left, block))
        self._coords = None

    def ensure_index(self, k: int) -> None:
        """Materialize targets out to index k (either sign)."""
        k = int(k)
        if abs(k) > self.cap:
            raise EnvironmentCapError(
                f"target index {k} exceeds the environment cap {self.cap}")
        if k > len(self._right):
            self._grow_right(k)
        elif -k > len(self._left):
            self._grow_left(-k)

    def ensure_span(self, lo: int, hi: int) -> None:
        self.ensure_index(int(lo))
        self.ensure_index(int(hi))

    def coords_view(self) -> tuple[np.ndarray, int]:
        """Combined coordinate array and origin offset.

        Returns (coords, origin) with coords[origin + k] == target(k)
        for every materialized k.  The array is rebuilt after growth;
        callers must re-fetch it whenever they extend the environment.
        """
        if self._coords is None:
            self._coords = np.concatenate((self._left[::-1], (0.0,), self._right))
        return self._coords, len(self._left)

    def target(self, k: int) -> float:
        """Coordinate of target k, materializing it if needed."""
        k = int(k)
        if k == 0:
            return 0.0
        self.ensure_index(k)
        return float(self._right[k - 1]) if k > 0 else float(self._left[-k - 1])

    def targets_at(self, ks) -> np.ndarray:
        """Vectorized target lookup."""
        ks = np.asarray(ks, dtype=np.int64)
        if ks.size:
            self.ensure_span(int(ks.min()), int(ks.max()))
        coords, origin = self.coords_view()
        return coords[origin + ks]

    def gap(self, k: int) -> float:
        """Gap ending at target k: target(k) - target(k - 1)."""
        return self.target(k) - self.target(k - 1)
