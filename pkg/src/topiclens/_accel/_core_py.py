"""Pure-Python fallback kernels.

These are the reference implementations of the two hot loops (stochastic
embedding optimization and wordcloud spiral placement) plus the PCG32
generator they draw from.  The compiled twin in ``_core.pyx`` mirrors the
arithmetic of this module operation for operation; both backends must
produce bit-identical output for identical inputs, which the test suite
checks.  Keep the two files in sync.
"""

import math

import numpy as np

_MASK64 = (1 << 64) - 1
_MASK32 = 0xFFFFFFFF
_PCG_MULT = 6364136223846793005


class Pcg32:
    """PCG-XSH-RR: 64-bit state, 32-bit output, selectable stream."""

    __slots__ = ("state", "inc")

    def __init__(self, seed, seq):
        self.inc = (((seq & _MASK64) << 1) | 1) & _MASK64
        self.state = ((self.inc + (seed & _MASK64)) * _PCG_MULT + self.inc) & _MASK64

    def next_uint32(self):
        old = self.state
        self.state = (old * _PCG_MULT + self.inc) & _MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & _MASK32
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((32 - rot) & 31))) & _MASK32

    def uniform(self):
        """Double in [0, 1)."""
        return self.next_uint32() * 2.0**-32

    def randint(self, n):
        """Integer in [0, n). Modulo bias is acceptable at kernel scale."""
        return self.next_uint32() % n


def _clip(g):
    if g > 4.0:
        return 4.0
    if g < -4.0:
        return -4.0
    return g


def optimize_embedding(pos, heads, tails, epochs_per_sample, a, b,
                       n_epochs, learning_rate, negative_samples, seed,
                       n_points):
    """Run the stochastic attract/repel layout on a 2-D embedding.

    ``pos`` is a (P, 2) float64 array of initial coordinates (not
    mutated).  ``heads``/``tails``/``epochs_per_sample`` describe the
    directed edges of the fuzzy graph; an edge is sampled whenever its
    epoch counter comes due, attracting both endpoints, and every
    positive sample triggers ``negative_samples`` repulsive updates of
    the head against random vertices.  A graph with no edges at all
    degrades to one repulsion pass per vertex per epoch so isolated
    point sets still spread out.

    Returns ``(coords, fail_epoch, fail_point)`` where the failure pair
    is (-1, -1) on success and names the first non-finite coordinate
    otherwise.
    """
    p_count = int(n_points)
    x = np.asarray(pos, dtype=np.float64).reshape(-1).tolist()
    heads_l = [int(v) for v in heads]
    tails_l = [int(v) for v in tails]
    eps_l = [float(v) for v in epochs_per_sample]
    next_l = list(eps_l)
    n_edges = len(heads_l)
    a = float(a)
    b = float(b)
    lr = float(learning_rate)
    neg = int(negative_samples)
    epochs = int(n_epochs)
    rng = Pcg32(seed, p_count)
    pow_ = math.pow

    for n in range(epochs):
        alpha = lr * (1.0 - n / epochs)
        if n_edges == 0:
            for i in range(p_count):
                for _ in range(neg):
                    v = rng.randint(p_count)
                    dx = x[2 * i] - x[2 * v]
                    dy = x[2 * i + 1] - x[2 * v + 1]
                    d2 = dx * dx + dy * dy
                    if d2 > 0.0:
                        coeff = (2.0 * b) / ((0.001 + d2) * (a * pow_(d2, b) + 1.0))
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
                if next_l[e] <= n:
                    h = heads_l[e]
                    t = tails_l[e]
                    dx = x[2 * h] - x[2 * t]
                    dy = x[2 * h + 1] - x[2 * t + 1]
                    d2 = dx * dx + dy * dy
                    if d2 > 0.0:
                        coeff = (-2.0 * a * b * pow_(d2, b - 1.0)) / (a * pow_(d2, b) + 1.0)
                        gx = _clip(coeff * dx)
                        gy = _clip(coeff * dy)
                        x[2 * h] += gx * alpha
                        x[2 * h + 1] += gy * alpha
                        x[2 * t] -= gx * alpha
                        x[2 * t + 1] -= gy * alpha
                    next_l[e] += eps_l[e]
                    for _ in range(neg):
                        v = rng.randint(p_count)
                        dx = x[2 * h] - x[2 * v]
                        dy = x[2 * h + 1] - x[2 * v + 1]
                        d2 = dx * dx + dy * dy
                        if d2 > 0.0:
                            coeff = (2.0 * b) / ((0.001 + d2) * (a * pow_(d2, b) + 1.0))
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
            if not (math.isfinite(x[2 * i]) and math.isfinite(x[2 * i + 1])):
                return np.asarray(x, dtype=np.float64).reshape(p_count, 2), n, i

    return np.asarray(x, dtype=np.float64).reshape(p_count, 2), -1, -1


def place_boxes(half_w, half_h, width, height):
    """Greedy largest-first spiral placement of axis-aligned boxes.

    Walks an Archimedean spiral (r = theta, step 0.1) out from the
    canvas center and accepts the first position where the box lies
    fully inside the canvas and intersects no previously placed box.
    A box whose spiral sweep exceeds half the canvas diagonal is left
    unplaced.

    Returns ``(xs, ys, placed)`` center coordinates and a placement
    flag per box, as float64/bool arrays.
    """
    hw = [float(v) for v in half_w]
    hh = [float(v) for v in half_h]
    n = len(hw)
    w = float(width)
    h = float(height)
    cx = w * 0.5
    cy = h * 0.5
    rmax = math.sqrt(w * w + h * h) * 0.5
    xs = [0.0] * n
    ys = [0.0] * n
    placed = [False] * n
    done = []
    cos_ = math.cos
    sin_ = math.sin

    for i in range(n):
        wi = hw[i]
        hi = hh[i]
        theta = 0.0
        while theta <= rmax:
            px = cx + theta * cos_(theta)
            py = cy + theta * sin_(theta)
            if px - wi >= 0.0 and px + wi <= w and py - hi >= 0.0 and py + hi <= h:
                collides = False
                for j in done:
                    if (px + wi > xs[j] - hw[j] and xs[j] + hw[j] > px - wi
                            and py + hi > ys[j] - hh[j] and ys[j] + hh[j] > py - hi):
                        collides = True
                        break
                if not collides:
                    xs[i] = px
                    ys[i] = py
                    placed[i] = True
                    done.append(i)
                    break
            theta += 0.1

    return (np.asarray(xs, dtype=np.float64),
            np.asarray(ys, dtype=np.float64),
            np.asarray(placed, dtype=bool))
