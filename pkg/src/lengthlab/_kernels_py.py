"""Pure numpy fallback for :mod:`lengthlab._kernels`; same signatures, same results."""
from __future__ import annotations

import numpy as np


def delta_rows(C, i0, i1):
    C = np.asarray(C)
    n = C.shape[0]
    best = None
    where = (-1, -1, -1)
    for i in range(i0, i1):
        # vals[j, k] = min(C[i, j], C[j, k]) - C[i, k]
        vals = np.minimum(C[i][:, None], C) - C[i][None, :]
        flat = int(np.argmax(vals))
        v = vals.flat[flat]
        if best is None or v > best:
            best = v
            where = (i, flat // n, flat % n)
    if best is None:
        return None, -1, -1, -1
    return (best.item() if isinstance(best, np.generic) else best), *where


def triangle_rows(D, i0, i1, tol):
    D = np.asarray(D)
    for i in range(i0, i1):
        # excess[j, k] = D[i, k] - D[i, j] - D[j, k]
        excess = D[i][None, :] - D[i][:, None] - D
        bad = np.flatnonzero(excess > tol)
        if bad.size:
            n = D.shape[0]
            return i, int(bad[0] // n), int(bad[0] % n)
    return None


def _bad(s1, s2, s3, tol):
    stacked = np.sort(np.stack([s1, s2, s3]), axis=0)
    return (stacked[2] - stacked[1]) > tol


def four_point_rows(D, i0, i1, tol):
    D = np.asarray(D)
    n = D.shape[0]
    for i in range(i0, i1):
        for j in range(i + 1, n):
            ks = np.arange(j + 1, n)
            if ks.size < 2:
                continue
            k, l = np.triu_indices(ks.size, 1)
            k, l = ks[k], ks[l]
            bad = _bad(D[i, j] + D[k, l], D[i, k] + D[j, l], D[i, l] + D[j, k], tol)
            hit = np.flatnonzero(bad)
            if hit.size:
                return i, j, int(k[hit[0]]), int(l[hit[0]])
    return None


def four_point_quads(D, Q, tol):
    D = np.asarray(D)
    Q = np.asarray(Q)
    if not len(Q):
        return -1
    i, j, k, l = Q[:, 0], Q[:, 1], Q[:, 2], Q[:, 3]
    hit = np.flatnonzero(_bad(D[i, j] + D[k, l], D[i, k] + D[j, l], D[i, l] + D[j, k], tol))
    return int(hit[0]) if hit.size else -1
