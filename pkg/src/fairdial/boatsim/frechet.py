"""Discrete Fréchet distance between polylines.

The classic dynamic programme: walking both curves forward only, the
coupling cost at (i, j) is the larger of the point distance and the best
predecessor.  Long inputs run through a vectorised sweep over antidiagonals
of the DP table; short ones use the plain Python recurrence, which also
serves as a cross-check in the tests.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import InputError

# below this many table cells the plain recurrence wins on overhead
_VECTOR_THRESHOLD = 4096


def _as_points(curve):
    arr = np.asarray(curve, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] != 2:
        raise InputError("a curve must be a non-empty sequence of (x, y) points")
    if not np.isfinite(arr).all():
        raise InputError("curve contains non-finite coordinates")
    return arr


def _frechet_python(p, q) -> float:
    n, m = len(p), len(q)
    dist = [
        [math.hypot(p[i][0] - q[j][0], p[i][1] - q[j][1]) for j in range(m)]
        for i in range(n)
    ]
    row = [0.0] * m
    row[0] = dist[0][0]
    for j in range(1, m):
        row[j] = max(row[j - 1], dist[0][j])
    for i in range(1, n):
        prev = row
        row = [0.0] * m
        row[0] = max(prev[0], dist[i][0])
        for j in range(1, m):
            best = min(prev[j], prev[j - 1], row[j - 1])
            row[j] = best if best > dist[i][j] else dist[i][j]
    return row[m - 1]


def _frechet_numpy(p, q) -> float:
    # Sweep antidiagonals; cell (i, j), i + j = k, needs (i-1, j) and
    # (i, j-1) from sweep k-1 plus (i-1, j-1) from sweep k-2.  Each sweep
    # is stored as a full-length vector indexed by i with inf outside its
    # valid band, which makes every boundary case fall out automatically.
    n, m = len(p), len(q)
    dist = np.hypot(p[:, None, 0] - q[None, :, 0], p[:, None, 1] - q[None, :, 1])
    inf = np.inf
    prev2 = np.full(n, inf)
    prev1 = np.full(n, inf)
    prev1[0] = dist[0, 0]
    for k in range(1, n + m - 1):
        i_lo = max(0, k - m + 1)
        i_hi = min(n - 1, k)
        shifted1 = np.empty(n)
        shifted1[0] = inf
        shifted1[1:] = prev1[:-1]  # (i-1, j)
        shifted2 = np.empty(n)
        shifted2[0] = inf
        shifted2[1:] = prev2[:-1]  # (i-1, j-1)
        best = np.minimum(prev1, np.minimum(shifted1, shifted2))
        cur = np.full(n, inf)
        idx = np.arange(i_lo, i_hi + 1)
        cur[i_lo : i_hi + 1] = np.maximum(best[i_lo : i_hi + 1], dist[idx, k - idx])
        prev2 = prev1
        prev1 = cur
    return float(prev1[n - 1])


def discrete_frechet(curve_a, curve_b) -> float:
    """Discrete Fréchet distance between two point sequences."""
    p = _as_points(curve_a)
    q = _as_points(curve_b)
    if len(p) * len(q) <= _VECTOR_THRESHOLD:
        return _frechet_python(p.tolist(), q.tolist())
    return _frechet_numpy(p, q)
