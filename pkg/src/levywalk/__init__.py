"""Random walks on random point processes, with verification tooling.

The package simulates a unit-speed particle bouncing between targets
laid down by a heavy-tailed renewal process on the line, and ships a
statistical harness that checks the simulated laws against their
proven diffusive limits at desk scale.
"""

__version__ = "0.1.0"

from .environment import (Constant, Environment, EnvironmentCapError,
                          EnvironmentFrozenError, Exponential, GapDistribution,
                          Pareto, UniformInterval, gap_mean, sample_gap)
from .jumps import (DensityError, JumpDensity, gaussian_abs_moment,
                    lazy_walk_density, remove_lazy, sample_jump, sample_jumps,
                    simple_walk_density, validate)
from .kernels import BACKEND
from .rng import substream
from .trajectory import (Trajectory, WalkerResult, collisions_up_to, evaluate,
                         position_at, sample_path, simulate, strip_lazy)
from .estimators import LimitConstants, clt_report, ks_distance, rescaled_moment
from .runner import collect_annealed, collect_quenched, time_grid
from .config import ConfigError, RunConfig, default_config, load_config
from .verification import CHECK_IDS, VerificationReport, run_checks
