"""Group models with effective arithmetic and word-ball enumeration.

Three kinds are supported: free abelian groups ``Z^d`` (payload: integer
vector), free groups ``F_r`` (payload: freely reduced word of signed generator
indices, ``+(i+1)`` for ``g_i`` and ``-(i+1)`` for ``G_i``) and finite groups
given by a multiplication table (payload: ``(index,)``).
"""
from __future__ import annotations

import json
import os
import re
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ResourceError, UsageError, ValidationError

DEFAULT_BALL_CAP = 10**6


def ball_cap() -> int:
    """Ball-size cap, overridable through ``LENGTHLAB_CAP``."""
    raw = os.environ.get("LENGTHLAB_CAP")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise UsageError(f"LENGTHLAB_CAP must be an integer, got {raw!r}") from None
    return DEFAULT_BALL_CAP


@dataclass(frozen=True)
class GroupElement:
    model_id: str
    payload: tuple

    def __repr__(self):
        return f"<{self.model_id}:{self.payload}>"


_TOKEN_RE = re.compile(r"([gG])(\d+)(?:\^(\d+))?")


class GroupModel:
    """An immutable group with a distinguished symmetric generating list."""

    def __init__(self, kind: str, rank: int | None = None, table=None, generators=None):
        self.kind = kind
        if kind in ("free", "free_abelian"):
            if rank is None or int(rank) < 1:
                raise ValidationError(f"{kind} group needs rank >= 1")
            self.rank = int(rank)
            self.model_id = f"{kind}({self.rank})"
            self.table = None
        elif kind == "finite":
            self._load_table(table)
            self.rank = None
        else:
            raise ValidationError(f"unknown group kind {kind!r}")
        self.identity = self._make(self._identity_payload())
        self._init_generators(generators)

    # -- construction ---------------------------------------------------

    def _identity_payload(self):
        if self.kind == "free_abelian":
            return (0,) * self.rank
        if self.kind == "free":
            return ()
        return (self._e,)

    def _load_table(self, table):
        if not table or not all(len(row) == len(table) for row in table):
            raise ValidationError("finite group table must be a non-empty square")
        n = len(table)
        t = [[int(x) for x in row] for row in table]
        if any(not 0 <= x < n for row in t for x in row):
            raise ValidationError("table entries out of range")
        idents = [e for e in range(n) if all(t[e][x] == x and t[x][e] == x for x in range(n))]
        if not idents:
            raise ValidationError("table has no two-sided identity")
        e = idents[0]
        inv = []
        for x in range(n):
            ys = [y for y in range(n) if t[x][y] == e and t[y][x] == e]
            if not ys:
                raise ValidationError(f"element {x} has no inverse")
            inv.append(ys[0])
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                for c in range(n):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise ValidationError(f"table not associative at ({a},{b},{c})")
        self.table = tuple(tuple(row) for row in t)
        self._e = e
        self._inv = tuple(inv)
        self.model_id = "finite(" + ",".join("".join(map(str, r)) if n <= 10 else "-".join(map(str, r)) for r in t) + ")"

    def _init_generators(self, generators):
        if self.kind == "free_abelian":
            base = [self._make(tuple(1 if j == i else 0 for j in range(self.rank))) for i in range(self.rank)]
        elif self.kind == "free":
            base = [self._make((i + 1,)) for i in range(self.rank)]
        else:
            if generators is None:
                generators = [x for x in range(len(self.table)) if x != self._e]
            base = [self._make((int(x),)) for x in generators]
            if not base:
                base = [self.identity]
        self.base_generators = tuple(base)
        gens: list[GroupElement] = []
        for g in base:
            for h in (g, self.inverse(g)):
                if h not in gens and h != self.identity:
                    gens.append(h)
        self.generators = tuple(gens)
        if self.kind == "finite":
            self._depth, self._words = self._finite_bfs()
            if len(self._depth) != len(self.table):
                raise ValidationError("generators do not generate the finite group")

    def _finite_bfs(self):
        depth = {self._e: 0}
        words = {self._e: ()}
        queue = deque([self._e])
        letters = []
        for i, g in enumerate(self.base_generators):
            letters.append((g.payload[0], i + 1))
            letters.append((self._inv[g.payload[0]], -(i + 1)))
        while queue:
            x = queue.popleft()
            for y, letter in letters:
                z = self.table[x][y]
                if z not in depth:
                    depth[z] = depth[x] + 1
                    words[z] = words[x] + (letter,)
                    queue.append(z)
        return depth, words

    def _make(self, payload) -> GroupElement:
        return GroupElement(self.model_id, tuple(payload))

    @classmethod
    def free(cls, rank: int) -> "GroupModel":
        return cls("free", rank=rank)

    @classmethod
    def free_abelian(cls, rank: int) -> "GroupModel":
        return cls("free_abelian", rank=rank)

    @classmethod
    def finite(cls, table, generators=None) -> "GroupModel":
        return cls("finite", table=table, generators=generators)

    @classmethod
    def from_spec(cls, spec) -> "GroupModel":
        if isinstance(spec, (str, Path)):
            spec = json.loads(Path(spec).read_text())
        if not isinstance(spec, dict) or "kind" not in spec:
            raise ValidationError("group spec must be an object with a 'kind'")
        kind = spec["kind"]
        if kind in ("free", "free_abelian"):
            return cls(kind, rank=spec.get("rank"))
        if kind == "finite":
            return cls("finite", table=spec.get("table"), generators=spec.get("generators"))
        raise ValidationError(f"unknown group kind {kind!r}")

    def to_spec(self) -> dict:
        if self.kind == "finite":
            spec = {"kind": "finite", "table": [list(r) for r in self.table]}
            default = [x for x in range(len(self.table)) if x != self._e]
            gens = [g.payload[0] for g in self.base_generators]
            if gens != default:
                spec["generators"] = gens
            return spec
        return {"kind": self.kind, "rank": self.rank}

    def __eq__(self, other):
        return isinstance(other, GroupModel) and other.model_id == self.model_id

    def __hash__(self):
        return hash(self.model_id)

    def __repr__(self):
        return f"GroupModel({self.model_id})"

    # -- arithmetic -----------------------------------------------------

    def _check(self, *elems: GroupElement):
        for g in elems:
            if not isinstance(g, GroupElement) or g.model_id != self.model_id:
                raise UsageError(f"element {g!r} does not belong to {self.model_id}")

    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement:
        self._check(a, b)
        if self.kind == "free_abelian":
            return GroupElement(self.model_id, tuple(x + y for x, y in zip(a.payload, b.payload)))
        if self.kind == "free":
            return GroupElement(self.model_id, _free_reduce_concat(a.payload, b.payload))
        return GroupElement(self.model_id, (self.table[a.payload[0]][b.payload[0]],))

    def payload_multiplier(self):
        """Unchecked product on raw payloads, for inner loops."""
        if self.kind == "free_abelian":
            if self.rank == 1:
                return lambda a, b: (a[0] + b[0],)
            return lambda a, b: tuple(x + y for x, y in zip(a, b))
        if self.kind == "free":
            return _free_reduce_concat
        table = self.table
        return lambda a, b: (table[a[0]][b[0]],)

    def inverse(self, a: GroupElement) -> GroupElement:
        self._check(a)
        if self.kind == "free_abelian":
            return GroupElement(self.model_id, tuple(-x for x in a.payload))
        if self.kind == "free":
            return GroupElement(self.model_id, tuple(-x for x in reversed(a.payload)))
        return GroupElement(self.model_id, (self._inv[a.payload[0]],))

    def product(self, elems: Iterable[GroupElement]) -> GroupElement:
        out = self.identity
        for g in elems:
            out = self.multiply(out, g)
        return out

    def power(self, g: GroupElement, n: int) -> GroupElement:
        base = g if n >= 0 else self.inverse(g)
        return self.product([base] * abs(n))

    def word_length(self, g: GroupElement) -> int:
        """Word length with respect to the standard generators."""
        self._check(g)
        if self.kind == "free_abelian":
            return sum(abs(x) for x in g.payload)
        if self.kind == "free":
            return len(g.payload)
        return self._depth[g.payload[0]]

    def sort_key(self, g: GroupElement):
        return (self.word_length(g), g.payload)

    def sorted(self, elems: Iterable[GroupElement]) -> list[GroupElement]:
        return sorted(elems, key=self.sort_key)

    # -- names ------------------------------------------------------------

    def element(self, value) -> GroupElement:
        """Build an element from a word string, an int (Z or a finite index),
        an int vector (Z^d) or a list of signed letters (free groups)."""
        if isinstance(value, GroupElement):
            self._check(value)
            return value
        if isinstance(value, bool):
            raise ValidationError(f"bad element {value!r}")
        if isinstance(value, int):
            if self.kind == "free_abelian" and self.rank == 1:
                return self._make((value,))
            if self.kind == "finite" and 0 <= value < len(self.table):
                return self._make((value,))
            raise ValidationError(f"integer element {value} needs Z or a finite index")
        if isinstance(value, (list, tuple)):
            if self.kind == "free_abelian" and len(value) == self.rank:
                return self._make(tuple(int(x) for x in value))
            if self.kind == "free":
                word = tuple(int(x) for x in value)
                if any(x == 0 or abs(x) > self.rank for x in word):
                    raise ValidationError(f"letter out of range in {value!r}")
                return self._make(free_reduce(word))
            raise ValidationError(f"vector element {value!r} does not fit {self.model_id}")
        if isinstance(value, str):
            return self.parse(value)
        raise ValidationError(f"bad element {value!r}")

    def parse(self, text: str) -> GroupElement:
        s = text.replace(" ", "").replace("*", "")
        if s in ("", "1", "e", "identity"):
            return self.identity
        if re.fullmatch(r"[+-]?\d+", s) and self.kind == "free_abelian" and self.rank == 1:
            return self._make((int(s),))
        pos = 0
        out = self.identity
        while pos < len(s):
            m = _TOKEN_RE.match(s, pos)
            if not m:
                raise ValidationError(f"cannot parse word {text!r} at {s[pos:]!r}")
            i = int(m.group(2))
            if i >= len(self.base_generators):
                raise ValidationError(f"generator index {i} out of range in {text!r}")
            g = self.base_generators[i]
            if m.group(1) == "G":
                g = self.inverse(g)
            out = self.multiply(out, self.power(g, int(m.group(3) or 1)))
            pos = m.end()
        return out

    def letters(self, g: GroupElement) -> tuple[int, ...]:
        """A shortest word for ``g`` as signed generator indices."""
        self._check(g)
        if self.kind == "free":
            return g.payload
        if self.kind == "free_abelian":
            out: list[int] = []
            for i, x in enumerate(g.payload):
                out.extend([(i + 1) if x > 0 else -(i + 1)] * abs(x))
            return tuple(out)
        return self._words[g.payload[0]]

    def format(self, g: GroupElement) -> str:
        word = self.letters(g)
        if not word:
            return "identity"
        parts = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            letter = ("g" if word[i] > 0 else "G") + str(abs(word[i]) - 1)
            parts.append(letter if j - i == 1 else f"{letter}^{j - i}")
            i = j
        return "".join(parts)

    # -- subgroups ----------------------------------------------------------

    def generated_by(self, elems: Sequence[GroupElement]) -> bool:
        """True iff ``elems`` generate the whole group."""
        for g in elems:
            self._check(g)
        if self.kind == "finite":
            seen = {self._e}
            queue = deque([self._e])
            steps = [g.payload[0] for g in elems] + [self._inv[g.payload[0]] for g in elems]
            while queue:
                x = queue.popleft()
                for y in steps:
                    z = self.table[x][y]
                    if z not in seen:
                        seen.add(z)
                        queue.append(z)
            return len(seen) == len(self.table)
        if self.kind == "free_abelian":
            return _lattice_is_full([list(g.payload) for g in elems], self.rank)
        return _folded_is_whole_free_group([g.payload for g in elems], self.rank)


def _free_reduce_concat(a: tuple, b: tuple) -> tuple:
    i = 0
    n = min(len(a), len(b))
    la = len(a)
    while i < n and a[la - 1 - i] == -b[i]:
        i += 1
    return a[: la - i] + b[i:]


def free_reduce(word: Sequence[int]) -> tuple:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _lattice_is_full(rows: list[list[int]], d: int) -> bool:
    rows = [r[:] for r in rows if any(r)]
    pivot_product = 1
    for col in range(d):
        active = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            p = active[0]
            nxt = [p]
            for r in active[1:]:
                q = r[col] // p[col]
                r = [x - q * y for x, y in zip(r, p)]
                (nxt if r[col] != 0 else rest).append(r)
            active = nxt
        if not active:
            return False
        pivot_product *= active[0][col]
        rows = [r for r in rest if any(r)]
    return abs(pivot_product) == 1


def _folded_is_whole_free_group(words: list[tuple], rank: int) -> bool:
    """Stallings folding: the subgroup is all of F_r iff the folded core
    graph is a single vertex carrying a loop for every generator."""
    parent: list[int] = [0]
    out_edges: list[dict[int, int]] = [{}]
    n_vertices = 1

    def new_vertex():
        nonlocal n_vertices
        parent.append(n_vertices)
        out_edges.append({})
        n_vertices += 1
        return n_vertices - 1

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    pending: list[tuple[int, int, int]] = []
    for w in words:
        w = free_reduce(w)
        if not w:
            continue
        v = 0
        for idx, letter in enumerate(w):
            u = 0 if idx == len(w) - 1 else new_vertex()
            pending.append((v, letter, u))
            v = u

    def add_edge(v, letter, u):
        stack = [(v, letter, u)]
        while stack:
            v, letter, u = stack.pop()
            v, u = find(v), find(u)
            for a, lab, b in ((v, letter, u), (u, -letter, v)):
                a, b = find(a), find(b)
                cur = out_edges[a].get(lab)
                if cur is None:
                    out_edges[a][lab] = b
                    continue
                cur = find(cur)
                if cur != b:
                    # merge b into cur, then replay b's edges
                    parent[b] = cur
                    moved = out_edges[b]
                    out_edges[b] = {}
                    for l2, t in moved.items():
                        stack.append((cur, l2, t))

    for e in pending:
        add_edge(*e)
    root = find(0)
    edges = {lab: find(t) for lab, t in out_edges[root].items()}
    return all(edges.get(s) == root and edges.get(-s) == root for s in range(1, rank + 1))


def word_ball(model: GroupModel, radius: int, cap: int | None = None) -> list[GroupElement]:
    """All elements of word length <= ``radius``, sorted by (length, payload)."""
    if radius < 0:
        raise ValidationError("radius must be non-negative")
    cap = ball_cap() if cap is None else cap
    seen = {model.identity}
    frontier = [model.identity]
    for _ in range(int(radius)):
        nxt = []
        for g in frontier:
            for s in model.generators:
                h = model.multiply(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > cap:
                        raise ResourceError(f"word ball exceeds cap of {cap} elements", cap=cap)
        if not nxt:
            break
        frontier = nxt
    return model.sorted(seen)


Z = GroupModel.free_abelian(1)
F2 = GroupModel.free(2)
