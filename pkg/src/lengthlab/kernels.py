"""Backend selection and threaded dispatch for the matrix scans.

The compiled extension is used when it imports; ``LENGTHLAB_PURE=1`` forces
the numpy fallback.  Results never depend on the backend or thread count:
work is split into contiguous row blocks and merged in block order.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels_py
from .numeric import DEFAULT_TAU, Approx, common_denominator, is_exact

try:
    if os.environ.get("LENGTHLAB_PURE"):
        raise ImportError("pure backend requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_INT_LIMIT = 2**60


def backend(name: str | None = None):
    if name is None:
        return _compiled if _compiled is not None else _kernels_py
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not available")
        return _compiled
    return _kernels_py


@dataclass
class ScaledMatrix:
    """A matrix of scalars as int64 (exact, times ``scale``), object ints, or float64."""

    data: np.ndarray
    scale: int | None
    tol: float

    @property
    def exact(self) -> bool:
        return self.scale is not None

    def unscale(self, v):
        if self.scale is not None:
            return Fraction(int(v), self.scale)
        return Approx(float(v), self.tol)

    def scaled(self, x) -> object:
        if self.scale is not None:
            return x * self.scale
        return float(x.value if isinstance(x, Approx) else x)


def to_matrix(rows, tol: float = DEFAULT_TAU, headroom: int = 4) -> ScaledMatrix:
    """Pack a 2-D list of scalars.  ``headroom`` bounds how many entries the
    kernels add together, so int64 sums cannot overflow."""
    flat = [x for r in rows for x in r]
    n = len(rows)
    m = len(rows[0]) if n else 0
    if all(is_exact(x) for x in flat):
        scale = common_denominator(flat)
        ints = [int(x * scale) for x in flat]
        biggest = max((abs(v) for v in ints), default=0)
        if biggest * headroom < _INT_LIMIT:
            return ScaledMatrix(np.array(ints, dtype=np.int64).reshape(n, m), scale, 0.0)
        arr = np.empty(n * m, dtype=object)
        arr[:] = ints
        return ScaledMatrix(arr.reshape(n, m), scale, 0.0)
    tols = [x.tol for x in flat if isinstance(x, Approx)]
    tol = max([tol, *tols])
    vals = [float(x.value) if isinstance(x, Approx) else float(x) for x in flat]
    return ScaledMatrix(np.array(vals, dtype=np.float64).reshape(n, m), None, tol)


def _impl_for(M: ScaledMatrix, name: str | None):
    if M.data.dtype == object:
        return _kernels_py
    return backend(name)


def _blocks(n: int, threads: int) -> list[tuple[int, int]]:
    threads = max(1, min(int(threads), n or 1))
    size = -(-n // threads) if n else 0
    return [(a, min(n, a + size)) for a in range(0, n, size)] if n else []


def _run(fn, blocks, threads):
    if threads <= 1 or len(blocks) <= 1:
        return [fn(a, b) for a, b in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda ab: fn(*ab), blocks))


def delta_scan(M: ScaledMatrix, threads: int = 1, name: str | None = None):
    """``(best, i, j, k)`` maximising ``min(C[i,j], C[j,k]) - C[i,k]``; best is unscaled."""
    impl = _impl_for(M, name)
    n = M.data.shape[0]
    parts = _run(lambda a, b: impl.delta_rows(M.data, a, b), _blocks(n, threads), threads)
    best = None
    where = (-1, -1, -1)
    for v, i, j, k in parts:
        if v is not None and (best is None or v > best):
            best, where = v, (i, j, k)
    if best is None:
        return None, where
    return M.unscale(best), where


def triangle_scan(M: ScaledMatrix, threads: int = 1, name: str | None = None):
    impl = _impl_for(M, name)
    n = M.data.shape[0]
    tol = float(M.tol)
    parts = _run(lambda a, b: impl.triangle_rows(M.data, a, b, tol), _blocks(n, threads), threads)
    return next((p for p in parts if p is not None), None)


def four_point_scan(M: ScaledMatrix, threads: int = 1, name: str | None = None):
    impl = _impl_for(M, name)
    n = M.data.shape[0]
    tol = float(2 * M.tol)
    parts = _run(lambda a, b: impl.four_point_rows(M.data, a, b, tol), _blocks(n, threads), threads)
    return next((p for p in parts if p is not None), None)


def four_point_sampled(M: ScaledMatrix, samples: int, seed: int, threads: int = 1, name: str | None = None):
    """Check ``samples`` random quadruples of distinct indices (fixed seed)."""
    impl = _impl_for(M, name)
    n = M.data.shape[0]
    if n < 4:
        return None
    rng = np.random.default_rng(seed)
    Q = np.ascontiguousarray(np.sort(_sample_quads(rng, n, samples), axis=1).astype(np.int64))
    tol = float(2 * M.tol)
    blocks = _blocks(len(Q), threads)
    parts = _run(lambda a, b: impl.four_point_quads(M.data, Q[a:b], tol), blocks, threads)
    for (a, _), r in zip(blocks, parts):
        if r >= 0:
            return tuple(int(x) for x in Q[a + r])
    return None


def _sample_quads(rng, n: int, samples: int) -> np.ndarray:
    # rejection-sample rows with four distinct indices
    out = np.empty((0, 4), dtype=np.int64)
    while len(out) < samples:
        cand = rng.integers(0, n, size=(2 * (samples - len(out)) + 16, 4))
        s = np.sort(cand, axis=1)
        ok = (s[:, 0] < s[:, 1]) & (s[:, 1] < s[:, 2]) & (s[:, 2] < s[:, 3])
        out = np.concatenate([out, cand[ok]])
    return out[:samples]
