# cython: language_level=3
"""Compiled kernels: stochastic embedding layout and wordcloud placement.

Operation-for-operation mirror of ``_core_py.py``.  Both backends must
produce bit-identical results; the extension is built with
-ffp-contract=off so the compiler cannot fuse multiply-adds.  Any change
here must be replicated in the fallback and vice versa.
"""

import numpy as np

from libc.math cimport pow, cos, sin, sqrt, isfinite
from libc.stdint cimport uint32_t, uint64_t, int64_t

cdef uint64_t _PCG_MULT = 6364136223846793005u
_MASK64 = (1 << 64) - 1


cdef class Pcg32:
    """PCG-XSH-RR: 64-bit state, 32-bit output, selectable stream."""

    cdef uint64_t state
    cdef uint64_t inc

    def __init__(self, seed, seq):
        cdef uint64_t s = <uint64_t>(seed & _MASK64)
        cdef uint64_t q = <uint64_t>(seq & _MASK64)
        self.inc = (q << 1) | 1u
        self.state = (self.inc + s) * _PCG_MULT + self.inc

    cdef inline uint32_t _next(self):
        cdef uint64_t old = self.state
        self.state = old * _PCG_MULT + self.inc
        cdef uint32_t xorshifted = <uint32_t>(((old >> 18) ^ old) >> 27)
        cdef uint32_t rot = <uint32_t>(old >> 59)
        return (xorshifted >> rot) | (xorshifted << ((32 - rot) & 31))

    def next_uint32(self):
        return self._next()

    def uniform(self):
        """Double in [0, 1)."""
        return self._next() * 2.0**-32

    def randint(self, n):
        """Integer in [0, n). Modulo bias is acceptable at kernel scale."""
        return self._next() % <uint32_t>n


cdef inline double _clip(double g) nogil:
    if g > 4.0:
        return 4.0
    if g < -4.0:
        return -4.0
    return g


def optimize_embedding(pos, heads, tails, epochs_per_sample, a, b,
                       n_epochs, learning_rate, negative_samples, seed,
                       n_points):
    """Compiled twin of ``_core_py.optimize_embedding``."""
    cdef int p_count = int(n_points)
    cdef double[::1] x = np.asarray(pos, dtype=np.float64).reshape(-1).copy()
    cdef int64_t[::1] heads_v = np.ascontiguousarray(heads, dtype=np.int64)
    cdef int64_t[::1] tails_v = np.ascontiguousarray(tails, dtype=np.int64)
    cdef double[::1] eps_v = np.ascontiguousarray(epochs_per_sample, dtype=np.float64)
    cdef double[::1] next_v = np.array(eps_v, dtype=np.float64, copy=True)
    cdef int n_edges = heads_v.shape[0]
    cdef double a_ = float(a)
    cdef double b_ = float(b)
    cdef double lr = float(learning_rate)
    cdef int neg = int(negative_samples)
    cdef int epochs = int(n_epochs)
    cdef Pcg32 rng = Pcg32(seed, p_count)

    cdef int n, e, i, s
    cdef int h, t, v
    cdef double alpha, dx, dy, d2, coeff, gx, gy

    for n in range(epochs):
        alpha = lr * (1.0 - <double>n / <double>epochs)
        if n_edges == 0:
            for i in range(p_count):
                for s in range(neg):
                    v = <int>(rng._next() % <uint32_t>p_count)
                    dx = x[2 * i] - x[2 * v]
                    dy = x[2 * i + 1] - x[2 * v + 1]
                    d2 = dx * dx + dy * dy
                    if d2 > 0.0:
                        coeff = (2.0 * b_) / ((0.001 + d2) * (a_ * pow(d2, b_) + 1.0))
                        gx = _clip(coeff * dx)
                        gy = _clip(coeff * dy)
                    elif i == v:
                        continue
                    else:
                        gx = 4.0
                        gy = 4.0
                    x[2 * i] += gx * alpha
                    x[2 * i + 1] += gy * alpha
        else:
            for e in range(n_edges):
                if next_v[e] <= n:
                    h = <int>heads_v[e]
                    t = <int>tails_v[e]
                    dx = x[2 * h] - x[2 * t]
                    dy = x[2 * h + 1] - x[2 * t + 1]
                    d2 = dx * dx + dy * dy
                    if d2 > 0.0:
                        coeff = (-2.0 * a_ * b_ * pow(d2, b_ - 1.0)) / (a_ * pow(d2, b_) + 1.0)
                        gx = _clip(coeff * dx)
                        gy = _clip(coeff * dy)
                        x[2 * h] += gx * alpha
                        x[2 * h + 1] += gy * alpha
                        x[2 * t] -= gx * alpha
                        x[2 * t + 1] -= gy * alpha
                    next_v[e] += eps_v[e]
                    for s in range(neg):
                        v = <int>(rng._next() % <uint32_t>p_count)
                        dx = x[2 * h] - x[2 * v]
                        dy = x[2 * h + 1] - x[2 * v + 1]
                        d2 = dx * dx + dy * dy
                        if d2 > 0.0:
                            coeff = (2.0 * b_) / ((0.001 + d2) * (a_ * pow(d2, b_) + 1.0))
                            gx = _clip(coeff * dx)
                            gy = _clip(coeff * dy)
                        elif h == v:
                            continue
                        else:
                            gx = 4.0
                            gy = 4.0
                        x[2 * h] += gx * alpha
                        x[2 * h + 1] += gy * alpha
        for i in range(p_count):
            if not (isfinite(x[2 * i]) and isfinite(x[2 * i + 1])):
                return np.asarray(x).reshape(p_count, 2), n, i

    return np.asarray(x).reshape(p_count, 2), -1, -1


def place_boxes(half_w, half_h, width, height):
    """Compiled twin of ``_core_py.place_boxes``."""
    cdef double[::1] hw = np.ascontiguousarray(half_w, dtype=np.float64)
    cdef double[::1] hh = np.ascontiguousarray(half_h, dtype=np.float64)
    cdef int n = hw.shape[0]
    cdef double w = float(width)
    cdef double h = float(height)
    cdef double cx = w * 0.5
    cdef double cy = h * 0.5
    cdef double rmax = sqrt(w * w + h * h) * 0.5
    xs_arr = np.zeros(n, dtype=np.float64)
    ys_arr = np.zeros(n, dtype=np.float64)
    placed_arr = np.zeros(n, dtype=bool)
    done_arr = np.zeros(n, dtype=np.int64)
    cdef double[::1] xs = xs_arr
    cdef double[::1] ys = ys_arr
    cdef int64_t[::1] done = done_arr
    placed_view = placed_arr

    cdef int i, d, j, n_done = 0
    cdef double wi, hi, theta, px, py
    cdef bint collides, ok

    for i in range(n):
        wi = hw[i]
        hi = hh[i]
        theta = 0.0
        ok = False
        while theta <= rmax:
            px = cx + theta * cos(theta)
            py = cy + theta * sin(theta)
            if px - wi >= 0.0 and px + wi <= w and py - hi >= 0.0 and py + hi <= h:
                collides = False
                for d in range(n_done):
                    j = <int>done[d]
                    if (px + wi > xs[j] - hw[j] and xs[j] + hw[j] > px - wi
                            and py + hi > ys[j] - hh[j] and ys[j] + hh[j] > py - hi):
                        collides = True
                        break
                if not collides:
                    xs[i] = px
                    ys[i] = py
                    placed_view[i] = True
                    done[n_done] = i
                    n_done += 1
                    ok = True
                    break
            theta += 0.1

    return xs_arr, ys_arr, placed_arr
