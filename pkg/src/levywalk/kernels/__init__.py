"""Kernel backend selection and walk drivers.

Two interchangeable backends implement the hot loops: a Cython
extension (_ckernels) and a vectorized numpy fallback (_pykernels).
They consume the generator's uniform stream in the same order, so a
fixed seed gives bit-identical trajectories either way.  Selection is
automatic at import; set LEVYWALK_BACKEND=python or =cython to force
one.

The drivers in this module own the orchestration the kernels do not:
growing output arrays, extending the environment when the walk leaves
the materialized span, and carrying a drawn-but-unapplied jump across
those pauses.
"""

from __future__ import annotations

import math
import os

import numpy as np

from . import _pykernels

DONE, NEED_ENV, FULL = _pykernels.DONE, _pykernels.NEED_ENV, _pykernels.FULL

_requested = os.environ.get("LEVYWALK_BACKEND", "").strip().lower()
if _requested in ("", "auto"):
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"
elif _requested in ("cython", "c", "compiled"):
    from . import _ckernels as _impl
    BACKEND = "cython"
elif _requested in ("python", "py", "numpy"):
    _impl = _pykernels
    BACKEND = "python"
else:
    raise RuntimeError(f"LEVYWALK_BACKEND={_requested!r} not recognized; "
                       f"use 'cython' or 'python'")


def backend_module(name: str | None = None):
    """The active backend, or a specific one by name (for tests/benchmarks)."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def _pre_extend(env, density, expected_steps: int) -> None:
    # a few standard deviations of the underlying walk, so most runs
    # never pause for environment growth
    if env.dist is None or env.frozen:
        return
    g = int(4.0 * math.sqrt(density.variance * max(expected_steps, 1))) + 16
    env.ensure_span(-min(g, env.cap), min(g, env.cap))


def _grow(arr: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=arr.dtype)
    out[:len(arr)] = arr
    return out


def walk_until(env, density, gen, *, t_max=None, max_steps=None, impl=None):
    """Run one walk on targets until a time or step bound.

    Returns (jumps, positions, targets_hit, collision_times) where the
    first has length n and the rest n + 1.  With t_max set, the walk
    stops after the first step whose cumulative travel exceeds t_max;
    with max_steps set, after exactly that many steps, whichever bound
    trips first.
    """
    impl = impl if impl is not None else _impl
    if t_max is None and max_steps is None:
        raise ValueError("need t_max, max_steps, or both")
    t_arg = math.inf if t_max is None else float(t_max)
    if not t_arg >= 0.0:
        raise ValueError(f"t_max must be nonnegative, got {t_max}")
    s_arg = (1 << 62) if max_steps is None else int(max_steps)
    if s_arg < 0:
        raise ValueError(f"max_steps must be nonnegative, got {max_steps}")
    if max_steps is not None:
        cap = max(s_arg, 1)
    else:
        pace = density.mean_abs * (env.dist.mean if env.dist is not None else 1.0)
        cap = max(int(t_arg / pace * 1.25) + 64, 64)
    xi = np.zeros(cap, dtype=np.int64)
    s = np.zeros(cap + 1, dtype=np.int64)
    y = np.zeros(cap + 1)
    tau = np.zeros(cap + 1)
    _pre_extend(env, density, min(cap, s_arg))
    stream = impl.make_stream(gen)
    n = 0
    pending = 0
    has_pending = False
    while True:
        coords, origin = env.coords_view()
        n, status, pending = impl.walk_chunk(
            coords, origin, t_arg, s_arg, density.support, density.cdf,
            xi, s, y, tau, n, stream, pending, has_pending)
        has_pending = status == NEED_ENV
        if status == DONE:
            break
        if status == NEED_ENV:
            env.ensure_index(int(s[n]) + int(pending))
        else:
            cap = math.ceil(cap * 1.6) + 64
            if max_steps is not None:
                cap = min(cap, s_arg)
            xi = _grow(xi, cap)
            s = _grow(s, cap + 1)
            y = _grow(y, cap + 1)
            tau = _grow(tau, cap + 1)
    return xi[:n].copy(), s[:n + 1].copy(), y[:n + 1].copy(), tau[:n + 1].copy()


def chain_sums(env, density, gen, checkpoints, impl=None):
    """Cumulative jump-length sums of the viewpoint chain.

    checkpoints must be increasing positive step counts.  Returns
    (sums, offset): sums[i] is the compensated total of
    |target(k_m) - target(k_{m-1})| over the first checkpoints[i]
    steps, offset the chain's final target index.
    """
    impl = impl if impl is not None else _impl
    cps = [int(c) for c in checkpoints]
    if not cps or cps[0] < 1 or any(b <= a for a, b in zip(cps, cps[1:])):
        raise ValueError("checkpoints must be strictly increasing and >= 1")
    _pre_extend(env, density, cps[-1])
    stream = impl.make_stream(gen)
    offset = 0
    total = 0.0
    comp = 0.0
    pending = 0
    has_pending = False
    done = 0
    sums = np.empty(len(cps))
    for i, c in enumerate(cps):
        while done < c:
            coords, origin = env.coords_view()
            d, offset, total, comp, status, pending = impl.chain_chunk(
                coords, origin, density.support, density.cdf, c - done,
                offset, total, comp, stream, pending, has_pending)
            done += d
            has_pending = status == NEED_ENV
            if has_pending:
                env.ensure_index(int(offset) + int(pending))
        sums[i] = total + comp
    return sums, int(offset)


def final_jump_lengths(env, density, gen, n_steps, count, impl=None) -> np.ndarray:
    """Length of step n_steps + 1 for `count` independent walkers.

    Only end positions are tracked, so this is the cheap way to sample
    the jump-length observable at a fixed step count in a fixed
    environment.
    """
    impl = impl if impl is not None else _impl
    out_s, out_j = impl.final_blocks(density.support, density.cdf,
                                     int(n_steps), int(count), impl.make_stream(gen))
    return np.abs(env.targets_at(out_s + out_j) - env.targets_at(out_s))
