"""Command-line entry point.

Subcommands: simulate, verify, pvp, averaging, dump-env.  Exit codes:
0 success / all checks pass, 1 at least one check failed, 2 usage or
configuration error, 3 runtime or resource error.  Every CSV starts
with a one-line versioned schema comment so downstream readers can
detect format drift.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .config import ConfigError, RunConfig, default_config, load_config
from .environment import Environment, EnvironmentCapError
from .estimators import (
    alternating_probe,
    averaging_check,
    constant_probe,
    harmonic_probe,
)
from .pvp import birkhoff_average
from .rng import substream
from .runner import collect_annealed, collect_quenched, time_grid
from .trajectory import simulate
from .verification import UnknownCheckError, run_checks


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levywalk",
        description="Random walks over heavy-tailed target arrays: "
                    "simulation batches and limit-theorem checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE",
                        help="TOML run configuration")
    common.add_argument("--seed", type=int, metavar="N",
                        help="override the master seed")
    common.add_argument("--threads", type=int, metavar="N",
                        help="worker process count")
    common.add_argument("--out-dir", metavar="DIR",
                        help="directory for output files")

    sub.add_parser("simulate", parents=[common],
                   help="run a walker ensemble and write result batches")
    p_verify = sub.add_parser("verify", parents=[common],
                              help="run statistical checks and write a report")
    p_verify.add_argument("--checks", metavar="IDS",
                          help="comma-separated check ids (default: all)")
    sub.add_parser("pvp", parents=[common],
                   help="iterate the particle-viewpoint chain and write "
                        "its running averages")
    sub.add_parser("averaging", parents=[common],
                   help="run the spreading-window averaging probes")
    sub.add_parser("dump-env", parents=[common],
                   help="materialize one environment and write its targets")
    return parser


def _load(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else default_config()
    updates = {}
    if args.seed is not None:
        updates["master_seed"] = int(args.seed)
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigError("--threads must be positive")
        updates["threads"] = int(args.threads)
    if args.out_dir is not None:
        updates["out_dir"] = str(args.out_dir)
    if updates:
        from dataclasses import replace
        cfg = replace(cfg, **updates)
    return cfg


def _write_csv(path: str, schema: str, columns, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# levywalk {schema}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)


def _out_path(cfg: RunConfig, name: str) -> str:
    os.makedirs(cfg.out_dir, exist_ok=True)
    return os.path.join(cfg.out_dir, name)


def _cmd_simulate(cfg: RunConfig, args) -> int:
    if cfg.mode == "quenched":
        times = time_grid(cfg.t_max, cfg.grid_points)
        batch = collect_quenched(cfg.dist, cfg.density, times, cfg.walkers,
                                 cfg.master_seed, env_seed=cfg.env_seed,
                                 threads=cfg.threads)
        rows = []
        for w in range(batch.walker_count):
            for i, t in enumerate(times):
                rows.append((w, t, batch.positions[w, i],
                             batch.collisions[w, i]))
    else:
        batch = collect_annealed(cfg.dist, cfg.density, cfg.t_max,
                                 cfg.environments, cfg.walkers,
                                 cfg.master_seed, threads=cfg.threads)
        rows = []
        for e in range(cfg.environments):
            for w in range(cfg.walkers):
                rows.append((e * cfg.walkers + w, cfg.t_max,
                             batch.positions[e, w], batch.collisions[e, w]))
    path = _out_path(cfg, "walkers.csv")
    _write_csv(path, "walker-result v1", ("walker_id", "t", "x", "n_of_t"),
               rows)
    print(f"wrote {path} ({len(rows)} rows)")

    if cfg.dump_trajectory:
        env_seed = cfg.env_seed if cfg.env_seed is not None else cfg.master_seed
        env = Environment(cfg.dist, env_seed)
        gen = substream(cfg.master_seed, "walker", 0)
        traj = simulate(env, cfg.density, gen, t_max=cfg.t_max)
        traj_rows = [(0, "", 0, 0.0, 0.0)]
        for n in range(1, traj.n_steps + 1):
            traj_rows.append((n, traj.jumps[n - 1], traj.positions[n],
                              traj.targets_hit[n], traj.collision_times[n]))
        tpath = _out_path(cfg, "trajectory.csv")
        _write_csv(tpath, "trajectory v1",
                   ("n", "xi_n", "S_n", "Y_n", "tau_n"), traj_rows)
        print(f"wrote {tpath} ({len(traj_rows)} rows)")
    return 0


def _cmd_verify(cfg: RunConfig, args) -> int:
    if args.checks is not None:
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        if not checks:
            raise ConfigError("--checks: no check ids given")
    else:
        checks = list(cfg.checks) if cfg.checks is not None else None
    report = run_checks(checks, master_seed=cfg.master_seed,
                        threads=cfg.threads, tolerances=cfg.tolerances)
    path = _out_path(cfg, "report.json")
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")

    series_rows = _trend_rows(report)
    if series_rows:
        spath = _out_path(cfg, "verify_series.csv")
        _write_csv(spath, "verify-series v1",
                   ("check_id", "series", "x", "value"), series_rows)

    for rec in report.records:
        status = "PASS" if rec.passed else "FAIL"
        print(f"[{status}] {rec.check_id}: estimate={rec.estimate:.6g} "
              f"target={rec.target:.6g} error={rec.error:.6g} "
              f"tolerance={rec.tolerance:.6g}")
    print(f"report: {path} ({len(report.records)} checks, "
          f"{report.elapsed_s:.1f}s)")
    return 0 if report.passed else 1


def _trend_rows(report) -> list:
    rows = []
    for rec in report.records:
        if rec.check_id == "thm2":
            times = rec.details.get("times")
            for q, entry in rec.details.get("even", {}).items():
                for t, est in zip(times, entry["estimates"]):
                    rows.append(("thm2", f"moment_q{q}", t, est))
        elif rec.check_id == "lem4":
            for n, est in zip(rec.details["step_counts"],
                              rec.details["estimates"]):
                rows.append(("lem4", "mean_leg", int(n), float(est)))
        elif rec.check_id == "lemA3":
            for name, entry in rec.details.get("probes", {}).items():
                for n, err in zip(entry["n"], entry["abs_errors"]):
                    rows.append(("lemA3", name, int(n), float(err)))
    return rows


def _cmd_pvp(cfg: RunConfig, args) -> int:
    env_seed = cfg.env_seed if cfg.env_seed is not None else cfg.master_seed
    env = Environment(cfg.dist, env_seed)
    gen = substream(cfg.master_seed, "pvp-cli")
    series = birkhoff_average(env, cfg.density, gen, cfg.pvp_steps)
    rows = []
    for n, avg in zip(series.steps, series.averages):
        rel = abs(avg / series.target - 1.0)
        rows.append((int(n), float(avg), series.target, rel))
    path = _out_path(cfg, "pvp.csv")
    _write_csv(path, "pvp v1", ("n", "birkhoff_avg", "target", "rel_err"),
               rows)
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


def _cmd_averaging(cfg: RunConfig, args) -> int:
    rows = []
    for probe in (constant_probe(0.7), alternating_probe(),
                  harmonic_probe(1.0)):
        series = averaging_check(probe, cfg.averaging_steps)
        for n, est, err in zip(series.n_values, series.estimates,
                               series.abs_errors):
            rows.append((probe.name, int(n), float(est), series.limit,
                         float(err)))
    path = _out_path(cfg, "averaging.csv")
    _write_csv(path, "averaging v1",
               ("probe", "n", "estimate", "limit", "abs_err"), rows)
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


def _cmd_dump_env(cfg: RunConfig, args) -> int:
    env_seed = cfg.env_seed if cfg.env_seed is not None else cfg.master_seed
    env = Environment(cfg.dist, env_seed)
    span = cfg.env_dump_span
    env.ensure_span(-span, span)
    rows = []
    for k in range(-span, span + 1):
        rows.append((k, env.target(k), env.gap(k)))
    path = _out_path(cfg, "environment.csv")
    _write_csv(path, "environment v1", ("k", "omega_k", "zeta_k"), rows)
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
    "pvp": _cmd_pvp,
    "averaging": _cmd_averaging,
    "dump-env": _cmd_dump_env,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _load(args)
        return _COMMANDS[args.command](cfg, args)
    except (ConfigError, UnknownCheckError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EnvironmentCapError, MemoryError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
