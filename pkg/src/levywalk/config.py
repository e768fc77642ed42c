"""Run configuration: a single TOML file mapped onto typed fields.

Unknown keys are rejected rather than ignored so a typo in a tolerance
name fails loudly, and every complaint carries the dotted path of the
offending key.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

from .environment import (
    Constant,
    Exponential,
    GapDistribution,
    Pareto,
    UniformInterval,
)
from .jumps import (
    DensityError,
    JumpDensity,
    from_one_sided,
    lazy_walk_density,
    simple_walk_density,
)


class ConfigError(Exception):
    """Malformed or inconsistent run configuration."""


_MODES = ("quenched", "annealed")
_GAP_KINDS = ("pareto", "exponential", "constant", "uniform")
_JUMP_PRESETS = ("srw", "lazy-srw")


@dataclass(frozen=True)
class RunConfig:
    dist: GapDistribution
    density: JumpDensity
    master_seed: int = 20260816
    mode: str = "quenched"
    env_seed: int | None = None
    t_max: float = 1.0e4
    grid_points: int = 8
    walkers: int = 10_000
    environments: int = 100
    threads: int = 1
    out_dir: str = "out"
    moment_orders: tuple[int, ...] = (1, 2, 4)
    checks: tuple[str, ...] | None = None
    tolerances: dict[str, float] = field(default_factory=dict)
    dump_trajectory: bool = False
    env_dump_span: int = 100
    pvp_steps: int = 100_000
    averaging_steps: tuple[int, ...] = (100, 10_000, 1_000_000)


def default_config() -> RunConfig:
    return RunConfig(dist=Pareto(alpha=1.5, xmin=1.0),
                     density=simple_walk_density())


def _reject_unknown(section: dict, allowed: set[str], path: str) -> None:
    for key in section:
        if key not in allowed:
            where = f"{path}.{key}" if path else key
            raise ConfigError(f"{where}: unknown key")


def _get(section: dict, key: str, kinds, default, path: str):
    if key not in section:
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, kinds):
        want = kinds[0].__name__ if isinstance(kinds, tuple) else kinds.__name__
        raise ConfigError(f"{path}.{key}: expected {want}, got {value!r}")
    return value


def _positive(value, key: str, path: str):
    if value <= 0:
        raise ConfigError(f"{path}.{key}: must be positive, got {value!r}")
    return value


def _parse_gaps(section: dict) -> GapDistribution:
    _reject_unknown(section, {"kind", "alpha", "xmin", "rate", "value",
                              "lo", "hi", "dump_span"}, "gaps")
    kind = _get(section, "kind", str, "pareto", "gaps")
    if kind not in _GAP_KINDS:
        raise ConfigError(
            f"gaps.kind: expected one of {_GAP_KINDS}, got {kind!r}")
    try:
        if kind == "pareto":
            return Pareto(
                alpha=float(_get(section, "alpha", (int, float), 1.5, "gaps")),
                xmin=float(_get(section, "xmin", (int, float), 1.0, "gaps")),
            )
        if kind == "exponential":
            return Exponential(
                rate=float(_get(section, "rate", (int, float), 1.0, "gaps")))
        if kind == "constant":
            return Constant(
                value=float(_get(section, "value", (int, float), 1.0, "gaps")))
        return UniformInterval(
            lo=float(_get(section, "lo", (int, float), 0.5, "gaps")),
            hi=float(_get(section, "hi", (int, float), 1.5, "gaps")),
        )
    except ValueError as exc:
        raise ConfigError(f"gaps: {exc}") from exc


def _parse_jumps(section: dict) -> JumpDensity:
    _reject_unknown(section, {"preset", "weights"}, "jumps")
    preset = section.get("preset")
    weights = section.get("weights")
    if preset is not None and weights is not None:
        raise ConfigError("jumps: give either preset or weights, not both")
    if preset is not None:
        if preset == "srw":
            return simple_walk_density()
        if preset == "lazy-srw":
            return lazy_walk_density()
        raise ConfigError(
            f"jumps.preset: expected one of {_JUMP_PRESETS}, got {preset!r}")
    if weights is None:
        return simple_walk_density()
    if not isinstance(weights, list) or not weights:
        raise ConfigError("jumps.weights: expected a non-empty list of"
                          " [k, weight] pairs")
    pairs = []
    for i, item in enumerate(weights):
        if (not isinstance(item, list) or len(item) != 2
                or isinstance(item[0], bool)
                or not isinstance(item[0], int)
                or not isinstance(item[1], (int, float))):
            raise ConfigError(
                f"jumps.weights[{i}]: expected an [int, number] pair,"
                f" got {item!r}")
        pairs.append((item[0], float(item[1])))
    try:
        return from_one_sided(pairs)
    except DensityError as exc:
        raise ConfigError(f"jumps.weights: {exc}") from exc


def _parse_verify(section: dict):
    _reject_unknown(section, {"checks", "tolerances"}, "verify")
    checks = None
    if "checks" in section:
        raw = section["checks"]
        if (not isinstance(raw, list)
                or not all(isinstance(c, str) for c in raw)):
            raise ConfigError("verify.checks: expected a list of strings")
        checks = tuple(raw)
    tolerances: dict[str, float] = {}
    raw_tol = section.get("tolerances", {})
    if not isinstance(raw_tol, dict):
        raise ConfigError("verify.tolerances: expected a table")
    for key, value in raw_tol.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(
                f"verify.tolerances.{key}: expected a number, got {value!r}")
        if not math.isfinite(float(value)) or float(value) < 0.0:
            raise ConfigError(
                f"verify.tolerances.{key}: must be finite and nonnegative")
        tolerances[key] = float(value)
    return checks, tolerances


_TOP_KEYS = {"master_seed", "mode", "env_seed", "t_max", "grid_points",
             "walkers", "environments", "threads", "out_dir",
             "moment_orders", "dump_trajectory", "gaps", "jumps",
             "verify", "pvp", "averaging"}


def from_mapping(data: dict) -> RunConfig:
    """Build a RunConfig from an already-parsed mapping."""
    if not isinstance(data, dict):
        raise ConfigError("top level: expected a table")
    _reject_unknown(data, _TOP_KEYS, "")

    mode = _get(data, "mode", str, "quenched", "run")
    if mode not in _MODES:
        raise ConfigError(f"mode: expected one of {_MODES}, got {mode!r}")

    t_max = float(_positive(
        _get(data, "t_max", (int, float), 1.0e4, "run"), "t_max", "run"))
    grid_points = _positive(
        _get(data, "grid_points", int, 8, "run"), "grid_points", "run")
    walkers = _positive(
        _get(data, "walkers", int, 10_000, "run"), "walkers", "run")
    environments = _positive(
        _get(data, "environments", int, 100, "run"), "environments", "run")
    threads = _positive(
        _get(data, "threads", int, 1, "run"), "threads", "run")

    orders_raw = _get(data, "moment_orders", list, [1, 2, 4], "run")
    orders = []
    for i, q in enumerate(orders_raw):
        if isinstance(q, bool) or not isinstance(q, int) or q < 0:
            raise ConfigError(
                f"moment_orders[{i}]: expected a nonnegative integer,"
                f" got {q!r}")
        orders.append(q)

    env_seed = _get(data, "env_seed", int, None, "run")
    checks, tolerances = _parse_verify(data.get("verify", {}))
    for table in ("gaps", "jumps", "pvp", "averaging"):
        if not isinstance(data.get(table, {}), dict):
            raise ConfigError(f"{table}: expected a table")

    dump_trajectory = data.get("dump_trajectory", False)
    if not isinstance(dump_trajectory, bool):
        raise ConfigError(
            f"dump_trajectory: expected a boolean, got {dump_trajectory!r}")
    env_dump_span = _positive(
        _get(data.get("gaps", {}), "dump_span", int, 100, "gaps"),
        "dump_span", "gaps")

    pvp_table = data.get("pvp", {})
    _reject_unknown(pvp_table, {"n_steps"}, "pvp")
    pvp_steps = _positive(
        _get(pvp_table, "n_steps", int, 100_000, "pvp"), "n_steps", "pvp")

    avg_table = data.get("averaging", {})
    _reject_unknown(avg_table, {"n_list"}, "averaging")
    avg_raw = _get(avg_table, "n_list", list, [100, 10_000, 1_000_000],
                   "averaging")
    avg_steps = []
    for i, n in enumerate(avg_raw):
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ConfigError(
                f"averaging.n_list[{i}]: expected a positive integer,"
                f" got {n!r}")
        avg_steps.append(n)
    if sorted(avg_steps) != avg_steps:
        raise ConfigError("averaging.n_list: must be increasing")

    return RunConfig(
        dist=_parse_gaps(data.get("gaps", {})),
        density=_parse_jumps(data.get("jumps", {})),
        master_seed=int(_get(data, "master_seed", int, 20260816, "run")),
        mode=mode,
        env_seed=None if env_seed is None else int(env_seed),
        t_max=t_max,
        grid_points=int(grid_points),
        walkers=int(walkers),
        environments=int(environments),
        threads=int(threads),
        out_dir=str(_get(data, "out_dir", str, "out", "run")),
        moment_orders=tuple(orders),
        checks=checks,
        tolerances=tolerances,
        dump_trajectory=dump_trajectory,
        env_dump_span=int(env_dump_span),
        pvp_steps=int(pvp_steps),
        averaging_steps=tuple(avg_steps),
    )


def load_config(path: str | os.PathLike) -> RunConfig:
    """Parse a TOML run configuration from disk."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!s}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path!s}: {exc}") from exc
    return from_mapping(data)
