"""Finite point-set models of the tree attached to a 0-hyperbolic length function.

Points are classes of pairs ``(g, m)`` with ``0 <= m <= l(g)``; two pairs at
the same height are identified when ``c(g, h) >= m``, and

    d((g, m), (h, n)) = m + n - 2 min(m, n, c(g, h)).

This is Chiswell's classical construction.  On a finite ball we only build
the points on a finite grid of heights and certify tree-ness through the
exact four-point condition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .axioms import check_A123, estimate_delta, gromov_matrix
from .errors import PreconditionError, ValidationError
from .length import LengthFunction
from .numeric import format_scalar, is_exact

EXHAUSTIVE_LIMIT = 200
SAMPLES = 10**6
SEED = 0x5EED


class _UnionFind:
    def __init__(self, keys):
        self.parent = {k: k for k in keys}

    def find(self, k):
        p = self.parent
        while p[k] != k:
            p[k] = p[p[k]]
            k = p[k]
        return k

    def union(self, a, b, key):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # the smaller canonical key stays representative
        if key(rb) < key(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra


@dataclass
class TreeModel:
    """Classes of grid points with their distance table.

    ``reps[i]`` is the canonical representative ``(g, m)`` of class ``i``;
    ``point_class`` maps every grid point to its class; ``dist`` is the
    class distance table as built (verification re-checks it).
    """

    model: object
    reps: list
    point_class: dict
    dist: list
    base: int
    grid: str
    heights: dict = field(default_factory=dict)  # g -> sorted grid heights

    def __len__(self):
        return len(self.reps)

    def distance_table(self) -> dict:
        m = self.model
        names = [f"{m.format(g)}@{format_scalar(h)}" for g, h in self.reps]
        return {"points": names, "base": self.base, "distances": [[format_scalar(x) for x in row] for row in self.dist]}

    def to_dot(self) -> str:
        m = self.model
        lines = ["graph tree {"]
        for i, (g, h) in enumerate(self.reps):
            lines.append(f'  c{i} [label="{m.format(g)}@{format_scalar(h)}"];')
        seen = set()
        for g in m.sorted(self.heights):
            hs = self.heights[g]
            for a, b in zip(hs, hs[1:]):
                ca, cb = self.point_class[(g, a)], self.point_class[(g, b)]
                e = (min(ca, cb), max(ca, cb))
                if ca != cb and e not in seen:
                    seen.add(e)
                    lines.append(f'  c{e[0]} -- c{e[1]} [label="{format_scalar(b - a)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _heights(lg, row, grid):
    if grid == "integer":
        return [Fraction(k) for k in range(int(lg) + 1)]
    pts = {Fraction(0) if is_exact(lg) else 0, lg}
    for c in row:
        if c >= 0 and c <= lg:
            pts.add(c)
    return sorted(pts)


def build_tree(l: LengthFunction, ball, grid: str = "integer", threads: int = 1) -> TreeModel:
    """Build the point classes over ``ball``.

    Requires A1-A3 and a zero delta estimate on the ball; the integer grid
    additionally needs integer values of ``l`` and ``c``.
    """
    if grid not in ("integer", "breakpoints"):
        raise ValidationError(f"unknown grid {grid!r}")
    m = l.model
    items = m.sorted(set(ball))
    report = check_A123(l, items)
    if not report.holds:
        bad = next(k for k, v in report.verdicts.items() if v.status == "fails")
        raise PreconditionError(f"{bad} fails on the ball", witness=report.verdicts[bad].witness)
    est = estimate_delta(l, items, threads=threads)
    if est.delta_hat > 0:
        raise PreconditionError(f"ball is not 0-hyperbolic (delta_hat={format_scalar(est.delta_hat)})", witness=est.witness)
    C = gromov_matrix(l, items)
    lens = [l(g) for g in items]
    if grid == "integer":
        for g, lg, row in zip(items, lens, C):
            if not is_exact(lg) or lg.denominator != 1 or any(not is_exact(c) or c.denominator != 1 for c in row):
                raise ValidationError(f"integer grid needs integer l and c; fails at {m.format(g)}")
    index = {g: i for i, g in enumerate(items)}
    heights = {g: _heights(lg, row, grid) for g, lg, row in zip(items, lens, C)}
    points = [(g, h) for g in items for h in heights[g]]

    def key(p):
        return (p[1], m.sort_key(p[0]))

    uf = _UnionFind(points)
    by_height: dict = {}
    for g, h in points:
        by_height.setdefault(h, []).append(g)
    for h, gs in by_height.items():
        for a_pos, a in enumerate(gs):
            ia = index[a]
            for b in gs[a_pos + 1:]:
                if C[ia][index[b]] >= h:
                    uf.union((a, h), (b, h), key)
    roots = sorted({uf.find(p) for p in points}, key=key)
    class_of_root = {r: i for i, r in enumerate(roots)}
    point_class = {p: class_of_root[uf.find(p)] for p in points}
    n = len(roots)
    dist = [[None] * n for _ in range(n)]
    for i, (g, a) in enumerate(roots):
        for j, (h, b) in enumerate(roots):
            c = C[index[g]][index[h]]
            dist[i][j] = a + b - 2 * min(a, b, c)
    base = point_class[(m.identity, heights[m.identity][0])]
    return TreeModel(m, roots, point_class, dist, base, grid, heights)


@dataclass
class TreeVerdict:
    ok: bool
    failed: str | None = None
    witness: tuple | None = None
    points: int = 0
    four_point_mode: str = "exhaustive"
    quadruples: int = 0

    def to_dict(self, m) -> dict:
        return {
            "ok": self.ok,
            "failed": self.failed,
            "witness": None if self.witness is None else [str(w) for w in self.witness],
            "points": self.points,
            "four_point_mode": self.four_point_mode,
            "quadruples": self.quadruples,
        }


def verify_tree(
    t: TreeModel,
    l: LengthFunction,
    ball,
    threads: int = 1,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    samples: int = SAMPLES,
    seed: int = SEED,
) -> TreeVerdict:
    """Check (i) metric axioms, (ii) the four-point condition, (iii) that the
    base-to-``(g, l(g))`` distance is ``l(g)`` for every ``g`` in ``ball``."""
    m = t.model
    n = len(t.reps)
    D = t.dist
    for i in range(n):
        if D[i][i] != 0:
            return TreeVerdict(False, "identity", (i,), n)
        for j in range(i + 1, n):
            if D[i][j] != D[j][i]:
                return TreeVerdict(False, "symmetry", (i, j), n)
            if not D[i][j] > 0:
                return TreeVerdict(False, "identity of indiscernibles", (i, j), n)
    M = kernels.to_matrix(D)
    bad = kernels.triangle_scan(M, threads=threads)
    if bad is not None:
        return TreeVerdict(False, "triangle", bad, n)
    if n < exhaustive_limit:
        mode, quads = "exhaustive", math.comb(n, 4)
        bad = kernels.four_point_scan(M, threads=threads)
    else:
        mode, quads = "sampled", samples
        bad = kernels.four_point_sampled(M, samples, seed, threads=threads)
    if bad is not None:
        return TreeVerdict(False, "four-point", bad, n, mode, quads)
    for g in m.sorted(set(ball)):
        lg = l(g)
        key = (g, lg)
        if key not in t.point_class:
            return TreeVerdict(False, "based length", (m.format(g),), n, mode, quads)
        if D[t.base][t.point_class[key]] != lg:
            return TreeVerdict(False, "based length", (m.format(g),), n, mode, quads)
    return TreeVerdict(True, None, None, n, mode, quads)
