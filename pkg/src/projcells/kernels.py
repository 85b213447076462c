"""Float64 batch kernels with a numba path and a pure-numpy fallback.

Set ``PROJCELLS_NO_NUMBA=1`` to force the numpy implementations (useful
for debugging or on platforms without numba).  Both paths compute the
same values; ``benchmarks/bench_kernels.py`` compares their speed.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("PROJCELLS_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

__all__ = [
    "HAVE_NUMBA", "GUARD_CENTERS", "word_count", "s03_conditions_batch",
    "orbit_matrices", "project_points", "guard_margins",
]

# cube roots of -1: -1 and e^{+-i pi/3}
GUARD_CENTERS = np.array([[-1.0, 0.0], [0.5, np.sqrt(3.0) / 2], [0.5, -np.sqrt(3.0) / 2]])


def word_count(depth: int) -> int:
    """Reduced words of length <= depth in a free group of rank two."""
    return 1 + 2 * (3 ** depth - 1)


# --- S03 conditions --------------------------------------------------------

def _s03_np(t, w):
    w0, w1, w2 = w[:, 0], w[:, 1], w[:, 2]
    t2 = t * t
    return np.stack([w1 - w2 * t + w0 * t2, w2 - w0 * t + w1 * t2, w0 - w1 * t + w2 * t2], axis=1)


@njit(cache=True)
def _s03_nb(t, w):
    n = t.shape[0]
    out = np.empty((n, 3))
    for i in range(n):
        ti = t[i]
        t2 = ti * ti
        a, b, c = w[i, 0], w[i, 1], w[i, 2]
        out[i, 0] = b - c * ti + a * t2
        out[i, 1] = c - a * ti + b * t2
        out[i, 2] = a - b * ti + c * t2
    return out


def s03_conditions_batch(t, w, use_numba=None):
    """The three convexity conditions for arrays ``t`` (n,) and ``w`` (n, 3)."""
    t = np.ascontiguousarray(t, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    if _pick(use_numba):
        return _s03_nb(t, w)
    return _s03_np(t, w)


# --- orbit enumeration -----------------------------------------------------

_INV = np.array([1, 0, 3, 2], dtype=np.int64)


def _orbit_np(gens, depth):
    levels = [np.eye(3)[None]]
    frontier, flast = levels[0], np.array([-1])
    for _ in range(depth):
        # (F, 4, 3, 3): every frontier word times every letter, prefix-major
        prod = np.einsum("fab,kbc->fkac", frontier, gens)
        keep = flast[:, None] != _INV[None, :]
        frontier = prod[keep]
        frontier = frontier / np.abs(frontier).max(axis=(1, 2))[:, None, None]
        flast = np.broadcast_to(np.arange(4), keep.shape)[keep]
        levels.append(frontier)
    return np.concatenate(levels)


@njit(cache=True)
def _orbit_nb(gens, depth, inv):
    n = 1 + 2 * (3 ** depth - 1)
    out = np.zeros((n, 3, 3))
    last = np.full(n, -1, dtype=np.int64)
    for i in range(3):
        out[0, i, i] = 1.0
    lo, hi, pos = 0, 1, 1
    for _ in range(depth):
        for j in range(lo, hi):
            for k in range(4):
                if last[j] >= 0 and inv[k] == last[j]:
                    continue
                m = 0.0
                for a in range(3):
                    for b in range(3):
                        s = 0.0
                        for c in range(3):
                            s += out[j, a, c] * gens[k, c, b]
                        out[pos, a, b] = s
                        if abs(s) > m:
                            m = abs(s)
                for a in range(3):
                    for b in range(3):
                        out[pos, a, b] /= m
                last[pos] = k
                pos += 1
        lo, hi = hi, pos
    return out


def orbit_matrices(r, g, depth, use_numba=None):
    """All reduced words in ``r, r^-1, g, g^-1`` up to ``depth``, as float matrices.

    Words are listed by length, then lexicographically in the letter
    order ``r, r^-1, g, g^-1``; each matrix is scaled to max-abs one.
    """
    r = np.asarray(r, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    gens = np.ascontiguousarray(np.stack([r, np.linalg.inv(r), g, np.linalg.inv(g)]))
    if _pick(use_numba):
        return _orbit_nb(gens, int(depth), _INV)
    return _orbit_np(gens, int(depth))


# --- projection and guard discs ----------------------------------------

def _project_np(A, om, pts):
    num = pts @ A.T
    den = pts @ om
    return num / den[:, None]


@njit(cache=True)
def _project_nb(A, om, pts):
    n = pts.shape[0]
    out = np.empty((n, 2))
    for i in range(n):
        d = om[0] * pts[i, 0] + om[1] * pts[i, 1] + om[2] * pts[i, 2]
        for k in range(2):
            out[i, k] = (A[k, 0] * pts[i, 0] + A[k, 1] * pts[i, 1] + A[k, 2] * pts[i, 2]) / d
    return out


def project_points(A, om, pts, use_numba=None):
    """Affine chart ``v -> A.v / (om.v)`` for rows ``pts`` (n, 3)."""
    A = np.ascontiguousarray(A, dtype=np.float64)
    om = np.ascontiguousarray(om, dtype=np.float64)
    pts = np.ascontiguousarray(pts, dtype=np.float64).reshape(-1, 3)
    if _pick(use_numba):
        return _project_nb(A, om, pts)
    return _project_np(A, om, pts)


def _margins_np(xy):
    d = np.linalg.norm(xy[:, None, :] - GUARD_CENTERS[None, :, :], axis=2)
    return d.min(axis=1) - 1.0


@njit(cache=True)
def _margins_nb(xy, centers):
    n = xy.shape[0]
    out = np.empty(n)
    for i in range(n):
        best = np.inf
        for c in range(3):
            dx = xy[i, 0] - centers[c, 0]
            dy = xy[i, 1] - centers[c, 1]
            d = np.sqrt(dx * dx + dy * dy)
            if d < best:
                best = d
        out[i] = best - 1.0
    return out


def guard_margins(xy, use_numba=None):
    """Distance to the nearest cube root of -1, minus one, per point."""
    xy = np.ascontiguousarray(xy, dtype=np.float64).reshape(-1, 2)
    if _pick(use_numba):
        return _margins_nb(xy, GUARD_CENTERS)
    return _margins_np(xy)


def _pick(use_numba):
    if use_numba is None:
        return HAVE_NUMBA
    return bool(use_numba) and HAVE_NUMBA
