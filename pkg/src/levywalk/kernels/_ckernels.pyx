#cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled walk kernels.

Mirrors _pykernels draw for draw: one uniform per committed step,
consumed through the generator's native double stream, so both
backends produce bit-identical trajectories from equal seeds.
"""

from libc.stdint cimport int64_t
from libc.math cimport fabs
from cpython.pycapsule cimport PyCapsule_GetPointer

import numpy as np
from numpy.random cimport bitgen_t

DONE, NEED_ENV, FULL = 0, 1, 2


def make_stream(gen):
    """The walk consumes the generator's underlying bit stream directly."""
    return gen.bit_generator


cdef inline Py_ssize_t _pick(const double* cdf, Py_ssize_t n, double u) noexcept nogil:
    # first index with cdf[i] > u (upper bound); u < 1 == cdf[n-1] always
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] <= u:
            lo = mid + 1
        else:
            hi = mid
    return lo


def walk_chunk(double[::1] coords, Py_ssize_t origin, double t_max, int64_t max_steps,
               int64_t[::1] support, double[::1] cdf,
               int64_t[::1] xi, int64_t[::1] s, double[::1] y, double[::1] tau,
               Py_ssize_t n0, stream, int64_t pending, bint has_pending):
    cdef bitgen_t* rng = <bitgen_t*> PyCapsule_GetPointer(stream.capsule, "BitGenerator")
    cdef Py_ssize_t cap = xi.shape[0]
    cdef int64_t lo = -<int64_t> origin
    cdef int64_t hi = <int64_t> (coords.shape[0] - 1 - origin)
    cdef Py_ssize_t n = n0, nsup = cdf.shape[0], idx
    cdef int64_t cur_s = s[n]
    cdef double cur_y = y[n]
    cdef double cur_tau = tau[n]
    cdef int64_t j, k
    cdef double u, yv
    with stream.lock:
        while True:
            if cur_tau > t_max or n >= <Py_ssize_t> max_steps:
                return n, 0, 0
            if n >= cap:
                return n, 2, 0
            if has_pending:
                j = pending
                has_pending = False
            else:
                u = rng.next_double(rng.state)
                j = support[_pick(&cdf[0], nsup, u)]
            k = cur_s + j
            if k < lo or k > hi:
                return n, 1, j
            cur_s = k
            idx = origin + <Py_ssize_t> k
            yv = coords[idx]
            cur_tau = cur_tau + fabs(yv - cur_y)
            cur_y = yv
            xi[n] = j
            n += 1
            s[n] = k
            y[n] = yv
            tau[n] = cur_tau


def chain_chunk(double[::1] coords, Py_ssize_t origin,
                int64_t[::1] support, double[::1] cdf,
                int64_t steps, int64_t offset, double total, double comp,
                stream, int64_t pending, bint has_pending):
    cdef bitgen_t* rng = <bitgen_t*> PyCapsule_GetPointer(stream.capsule, "BitGenerator")
    cdef int64_t lo = -<int64_t> origin
    cdef int64_t hi = <int64_t> (coords.shape[0] - 1 - origin)
    cdef Py_ssize_t nsup = cdf.shape[0]
    cdef int64_t done = 0, j, k
    cdef double u, obs, v, t
    cdef double prev = coords[origin + <Py_ssize_t> offset]
    with stream.lock:
        while done < steps:
            if has_pending:
                j = pending
                has_pending = False
            else:
                u = rng.next_double(rng.state)
                j = support[_pick(&cdf[0], nsup, u)]
            k = offset + j
            if k < lo or k > hi:
                return done, offset, total, comp, 1, j
            obs = fabs(coords[origin + <Py_ssize_t> k] - prev)
            v = obs - comp
            t = total + v
            comp = (t - total) - v
            total = t
            prev = coords[origin + <Py_ssize_t> k]
            offset = k
            done += 1
    return done, offset, total, comp, 0, 0


def final_blocks(int64_t[::1] support, double[::1] cdf, int64_t n_steps, int64_t count, stream):
    cdef bitgen_t* rng = <bitgen_t*> PyCapsule_GetPointer(stream.capsule, "BitGenerator")
    cdef Py_ssize_t nsup = cdf.shape[0]
    out_s = np.empty(count, dtype=np.int64)
    out_j = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] sv = out_s
    cdef int64_t[::1] jv = out_j
    cdef int64_t ssum, w, i
    cdef double u
    with stream.lock:
        for w in range(count):
            ssum = 0
            for i in range(n_steps):
                u = rng.next_double(rng.state)
                ssum += support[_pick(&cdf[0], nsup, u)]
            sv[w] = ssum
            u = rng.next_double(rng.state)
            jv[w] = support[_pick(&cdf[0], nsup, u)]
    return out_s, out_j
