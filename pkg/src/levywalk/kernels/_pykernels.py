"""Vectorized numpy fallback for the compiled kernels.

Both backends advance the walk one committed step per uniform draw, in
the same order, so trajectories agree bit for bit.  This backend draws
uniforms in blocks through UniformSource and returns the unused tail
after a stop, which keeps the stream position identical to the
one-draw-at-a-time compiled loop.
"""

from __future__ import annotations

import math

import numpy as np

DONE, NEED_ENV, FULL = 0, 1, 2

_BLOCK = 4096


class UniformSource:
    """Sequential uniforms from a Generator with push-back of unused draws."""

    def __init__(self, gen: np.random.Generator):
        self._gen = gen
        self._leftover = None

    def take(self, n: int) -> np.ndarray:
        if self._leftover is None:
            return self._gen.random(n)
        left = self._leftover
        if len(left) >= n:
            self._leftover = left[n:] if len(left) > n else None
            return left[:n]
        self._leftover = None
        return np.concatenate((left, self._gen.random(n - len(left))))

    def unget(self, arr: np.ndarray) -> None:
        if len(arr) == 0:
            return
        if self._leftover is None:
            self._leftover = arr
        else:
            self._leftover = np.concatenate((arr, self._leftover))


def make_stream(gen: np.random.Generator) -> UniformSource:
    return UniformSource(gen)


def _draw_jumps(support, cdf, stream, m, pending, has_pending):
    """Block of m jumps plus the uniforms consumed and the index offset.

    With a pending jump the first slot is filled without a draw, so
    block position i corresponds to uniform index i - off.
    """
    if has_pending:
        jumps = np.empty(m, dtype=np.int64)
        jumps[0] = pending
        if m > 1:
            u = stream.take(m - 1)
            jumps[1:] = support[np.searchsorted(cdf, u, side="right")]
        else:
            u = np.empty(0)
        return jumps, u, 1
    u = stream.take(m)
    return support[np.searchsorted(cdf, u, side="right")], u, 0


def walk_chunk(coords, origin, t_max, max_steps, support, cdf,
               xi, s, y, tau, n0, stream, pending, has_pending):
    """Advance the target walk from step n0 until a stop condition.

    Returns (n, status, pending_jump): n is the number of committed
    steps; pending_jump is meaningful only for NEED_ENV and holds a
    drawn jump that could not be applied inside the materialized span.
    """
    cap = xi.shape[0]
    lo = -origin
    hi = coords.shape[0] - 1 - origin
    n = n0
    cur_s = int(s[n])
    cur_y = float(y[n])
    cur_tau = float(tau[n])
    while True:
        if cur_tau > t_max or n >= max_steps:
            return n, DONE, 0
        if n >= cap:
            return n, FULL, 0
        m = int(min(_BLOCK, cap - n, max_steps - n))
        jumps, u, off = _draw_jumps(support, cdf, stream, m, pending, has_pending)
        has_pending = False
        s_new = cur_s + np.cumsum(jumps)
        outside = (s_new < lo) | (s_new > hi)
        j_env = int(np.argmax(outside)) if outside.any() else m
        ys = coords[origin + s_new[:j_env]]
        deltas = np.abs(np.diff(np.concatenate(((cur_y,), ys))))
        # chained accumulation = the same sequence of float adds as the
        # compiled per-step loop, so tau matches it bit for bit
        taus = np.add.accumulate(np.concatenate(((cur_tau,), deltas)))[1:]
        over = taus > t_max
        if over.any():
            c = int(np.argmax(over)) + 1    # the crossing step is committed
            stream.unget(u[c - off:])
            _commit(xi, s, y, tau, n, jumps, s_new, ys, taus, c)
            return n + c, DONE, 0
        if j_env < m:
            c = j_env
            stream.unget(u[c + 1 - off:])   # position c's draw rides in pending
            _commit(xi, s, y, tau, n, jumps, s_new, ys, taus, c)
            return n + c, NEED_ENV, int(jumps[c])
        _commit(xi, s, y, tau, n, jumps, s_new, ys, taus, m)
        n += m
        cur_s = int(s_new[m - 1])
        cur_y = float(ys[m - 1])
        cur_tau = float(taus[m - 1])


def _commit(xi, s, y, tau, n, jumps, s_new, ys, taus, c):
    xi[n:n + c] = jumps[:c]
    s[n + 1:n + 1 + c] = s_new[:c]
    y[n + 1:n + 1 + c] = ys[:c]
    tau[n + 1:n + 1 + c] = taus[:c]


def chain_chunk(coords, origin, support, cdf, steps, offset, total, comp,
                stream, pending, has_pending):
    """Advance the environment-viewpoint chain up to `steps` steps.

    Accumulates the jump-length observable |target(k') - target(k)|
    into a compensated (total, comp) pair.  Returns (done, offset,
    total, comp, status, pending_jump).
    """
    lo = -origin
    hi = coords.shape[0] - 1 - origin
    done = 0
    while done < steps:
        m = int(min(_BLOCK, steps - done))
        jumps, u, off = _draw_jumps(support, cdf, stream, m, pending, has_pending)
        has_pending = False
        k_new = offset + np.cumsum(jumps)
        outside = (k_new < lo) | (k_new > hi)
        c = int(np.argmax(outside)) if outside.any() else m
        if c > 0:
            ys = coords[origin + k_new[:c]]
            obs = np.abs(np.diff(np.concatenate(((coords[origin + offset],), ys))))
            block = math.fsum(obs)
            v = block - comp
            t = total + v
            comp = (t - total) - v
            total = t
            offset = int(k_new[c - 1])
            done += c
        if c < m:
            stream.unget(u[c + 1 - off:])
            return done, offset, total, comp, NEED_ENV, int(jumps[c])
    return done, offset, total, comp, DONE, 0


def final_blocks(support, cdf, n_steps, count, stream):
    """Positions-only walks: `count` walkers of n_steps jumps each.

    Returns (end_positions, next_jumps), both int64 arrays of length
    count.  Walkers consume the stream one after another, n_steps + 1
    draws each, matching the compiled double loop.
    """
    out_s = np.empty(count, dtype=np.int64)
    out_j = np.empty(count, dtype=np.int64)
    per = int(n_steps) + 1
    chunk = max(1, 2_000_000 // per)
    i = 0
    while i < count:
        b = min(chunk, count - i)
        u = stream.take(b * per)
        jumps = support[np.searchsorted(cdf, u, side="right")].reshape(b, per)
        out_s[i:i + b] = jumps[:, :n_steps].sum(axis=1)
        out_j[i:i + b] = jumps[:, n_steps]
        i += b
    return out_s, out_j
