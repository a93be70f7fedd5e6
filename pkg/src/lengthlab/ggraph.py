"""Metric G-graphs presented by finite voltage data.

A :class:`QuotientGGraph` lists quotient vertices and edges; each edge
carries a group element (its voltage) and a positive length.  The developed
graph has vertices ``(g, v)`` and an edge ``(g, v) -- (g*s, w)`` of length
``len`` for every quotient edge ``(v, w, s, len)``.  Left multiplication on
the first coordinate is a free isometric action, and the based length
function at ``(1, basepoint)`` is ``g -> d((1, p), (g, p))``.
"""
from __future__ import annotations

import heapq
import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .errors import PreconditionError, ResourceError, StructureError, ValidationError
from .groups import GroupElement, GroupModel, ball_cap
from .length import LengthFunction
from .numeric import DEFAULT_TAU, Approx, as_scalar, common_denominator, format_scalar, is_exact


@dataclass(frozen=True)
class QEdge:
    tail: str
    head: str
    voltage: GroupElement
    length: object


class QuotientGGraph:
    def __init__(self, model: GroupModel, vertices, edges, basepoint: str, tol: float = DEFAULT_TAU):
        self.model = model
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices) or not self.vertices:
            raise ValidationError("quotient vertices must be distinct and non-empty")
        if basepoint not in self.vertices:
            raise ValidationError(f"basepoint {basepoint!r} is not a quotient vertex")
        self.basepoint = basepoint
        self.tol = tol
        es = []
        for e in edges:
            if e.tail not in self.vertices or e.head not in self.vertices:
                raise ValidationError(f"edge {e.tail}->{e.head} uses an unknown vertex")
            model._check(e.voltage)
            length = as_scalar(e.length)
            if not length > 0:
                raise ValidationError(f"edge {e.tail}->{e.head} must have positive length")
            es.append(QEdge(e.tail, e.head, e.voltage, length))
        if not es:
            raise ValidationError("quotient graph has no edges")
        self.edges = tuple(es)
        self.exact = all(is_exact(e.length) for e in self.edges)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        self._oracle = None
        self._oracle_lock = threading.Lock()

    # -- io ---------------------------------------------------------------

    @classmethod
    def cayley(cls, model: GroupModel, lengths: Mapping) -> "QuotientGGraph":
        """One vertex, one loop per generator with the given length."""
        edges = [QEdge("*", "*", model.element(s), as_scalar(v)) for s, v in lengths.items()]
        return cls(model, ["*"], edges, "*")

    @classmethod
    def from_spec(cls, spec) -> "QuotientGGraph":
        if isinstance(spec, (str, Path)):
            spec = json.loads(Path(spec).read_text())
        try:
            model = GroupModel.from_spec(spec["group"])
            edges = [
                QEdge(str(e["tail"]), str(e["head"]), model.element(e.get("voltage", "identity")), as_scalar(e["length"]))
                for e in spec["edges"]
            ]
            return cls(model, spec["vertices"], edges, str(spec["basepoint"]))
        except KeyError as exc:
            raise ValidationError(f"quotient-graph spec is missing {exc}") from None

    def to_spec(self) -> dict:
        return {
            "group": self.model.to_spec(),
            "vertices": list(self.vertices),
            "basepoint": self.basepoint,
            "edges": [
                {"tail": e.tail, "head": e.head, "voltage": self.model.format(e.voltage), "length": format_scalar(e.length)}
                for e in self.edges
            ],
        }

    def edge_lengths(self) -> list:
        return [e.length for e in self.edges]

    # -- quotient-level structure -----------------------------------------

    def quotient_distances(self) -> dict[str, object]:
        """Distance in the quotient graph from each vertex to the basepoint.

        Every quotient path lifts, so this is also the distance from any
        developed vertex over ``v`` to the basepoint orbit.
        """
        dist = {self.basepoint: Fraction(0) if self.exact else Approx(0, self.tol)}
        heap = [(0.0, 0, self.basepoint)]
        settled = set()
        counter = 0
        adj: dict[str, list] = {v: [] for v in self.vertices}
        for e in self.edges:
            adj[e.tail].append((e.head, e.length))
            adj[e.head].append((e.tail, e.length))
        while heap:
            _, _, v = heapq.heappop(heap)
            if v in settled:
                continue
            settled.add(v)
            for w, length in adj[v]:
                nd = dist[v] + length
                if w not in dist or nd < dist[w]:
                    dist[w] = nd
                    counter += 1
                    heapq.heappush(heap, (float(nd), counter, w))
        return dist

    def voltage_subgroup_generators(self) -> list[GroupElement]:
        """Voltages of the fundamental closed walks at the basepoint."""
        m = self.model
        tree = {self.basepoint: m.identity}
        order = [self.basepoint]
        for v in order:
            for e in self.edges:
                if e.tail == v and e.head not in tree:
                    tree[e.head] = m.multiply(tree[v], e.voltage)
                    order.append(e.head)
                elif e.head == v and e.tail not in tree:
                    tree[e.tail] = m.multiply(tree[v], m.inverse(e.voltage))
                    order.append(e.tail)
        if len(tree) != len(self.vertices):
            return []
        out = []
        for e in self.edges:
            h = m.multiply(m.multiply(tree[e.tail], e.voltage), m.inverse(tree[e.head]))
            if h != m.identity:
                out.append(h)
        return out

    def check_connected(self) -> None:
        """Raise :class:`StructureError` unless the development is connected."""
        if len(self.quotient_distances()) != len(self.vertices):
            raise StructureError("quotient graph is disconnected")
        if not self.model.generated_by(self.voltage_subgroup_generators()):
            raise StructureError("voltages do not generate the group: the development is disconnected")

    # -- shortest paths ---------------------------------------------------

    def oracle(self) -> "_DistanceOracle":
        with self._oracle_lock:
            if self._oracle is None:
                self._oracle = _DistanceOracle(self)
            return self._oracle


class _DistanceOracle:
    """Resumable Dijkstra from ``(identity, basepoint)`` on the development.

    Settled distances are final, so queries only ever extend the frontier.
    Exact graphs run on integers scaled by the common denominator.
    """

    def __init__(self, qg: QuotientGGraph, cap: int | None = None):
        self.qg = qg
        self.model = qg.model
        self.cap = ball_cap() if cap is None else cap
        if qg.exact:
            self.scale = common_denominator(qg.edge_lengths())
            conv = lambda x: int(x * self.scale)  # noqa: E731
        else:
            self.scale = None
            conv = float
        n = len(qg.vertices)
        self.adj: list[list[tuple[int, tuple, object]]] = [[] for _ in range(n)]
        for e in qg.edges:
            t, h = qg._index[e.tail], qg._index[e.head]
            self.adj[t].append((h, e.voltage.payload, conv(e.length)))
            self.adj[h].append((t, self.model.inverse(e.voltage).payload, conv(e.length)))
        self._mul = self.model.payload_multiplier()
        self.base = qg._index[qg.basepoint]
        start = (self.model.identity.payload, self.base)
        zero = 0 if qg.exact else 0.0
        self.settled: dict[tuple, object] = {}
        self.tentative: dict[tuple, object] = {start: zero}
        self.heap = [(zero, start[0], start[1])]
        self.lock = threading.Lock()

    def _unscale(self, d):
        if self.scale is not None:
            return Fraction(d, self.scale)
        return Approx(d, self.qg.tol)

    def _scale_bound(self, bound):
        if bound is None:
            return None
        bound = as_scalar(bound)
        if self.scale is not None and is_exact(bound):
            return bound * self.scale
        v = float(bound.value + bound.tol) if isinstance(bound, Approx) else float(bound)
        return v * self.scale if self.scale is not None else v + self.qg.tol

    def _pop(self) -> bool:
        heap, settled, tentative = self.heap, self.settled, self.tentative
        mul = self._mul
        while heap:
            d, payload, v = heapq.heappop(heap)
            key = (payload, v)
            if key in settled:
                continue
            settled[key] = d
            if len(settled) > self.cap:
                raise ResourceError(f"development exceeds cap of {self.cap} vertices", cap=self.cap)
            for w, s, length in self.adj[v]:
                h = mul(payload, s)
                nk = (h, w)
                if nk in settled:
                    continue
                nd = d + length
                old = tentative.get(nk)
                if old is None or nd < old:
                    tentative[nk] = nd
                    heapq.heappush(heap, (nd, h, w))
            return True
        return False

    def distance(self, g: GroupElement, bound=None, vertex: str | None = None):
        """Scaled-back distance to ``(g, vertex)``, or None if beyond ``bound``."""
        v = self.base if vertex is None else self.qg._index[vertex]
        key = (g.payload, v)
        limit = self._scale_bound(bound)
        with self.lock:
            while key not in self.settled:
                if not self.heap:
                    return None
                if limit is not None and self.heap[0][0] > limit:
                    return None
                self._pop()
            d = self.settled[key]
        if limit is not None and d > limit:
            return None
        return self._unscale(d)

    def settle_radius(self, radius) -> dict[tuple, object]:
        """Settle every vertex within ``radius``; return those (scaled)."""
        limit = self._scale_bound(radius)
        with self.lock:
            while self.heap and self.heap[0][0] <= limit:
                self._pop()
            return {k: d for k, d in self.settled.items() if d <= limit}

    def ball(self, radius) -> list[GroupElement]:
        inside = self.settle_radius(radius)
        mid = self.model.model_id
        return [GroupElement(mid, p) for (p, v) in inside if v == self.base]


def based_length(qg: QuotientGGraph, g: GroupElement, bound=None):
    """``d(p, p.g)`` if it is at most ``bound`` (no bound: always), else None."""
    return qg.oracle().distance(g, bound)


def based_length_function(qg: QuotientGGraph) -> LengthFunction:
    oracle = qg.oracle()
    m = qg.model
    # a path to (g, b) multiplies its voltages to g, so |g| <= sum |s_e| <= l(g) / c_low
    ratios = [e.length / m.word_length(e.voltage) for e in qg.edges if e.voltage != m.identity]
    c_low = min(ratios) if ratios else Fraction(1)

    def evaluate(g):
        d = oracle.distance(g)
        if d is None:
            raise StructureError(f"{qg.model.format(g)} is not reachable in the development")
        return d

    return LengthFunction(
        qg.model,
        evaluate,
        exact=qg.exact,
        label=f"ggraph[{len(qg.vertices)}v,{len(qg.edges)}e]",
        lower_bound=(c_low, 0),
        ball_enumerator=oracle.ball,
        spec={"family": "ggraph_based", "graph": qg.to_spec()},
    )


@dataclass
class DevelopedBall:
    model: GroupModel
    radius: object
    vertices: dict  # (GroupElement, q_vertex) -> distance
    edges: list = field(default_factory=list)  # ((g, v), (h, w), length)

    def to_dot(self) -> str:
        m = self.model
        names = {}
        ordered = sorted(self.vertices, key=lambda k: (m.sort_key(k[0]), k[1]))
        lines = ["graph developed {"]
        for i, (g, v) in enumerate(ordered):
            names[(g, v)] = f"n{i}"
            d = format_scalar(self.vertices[(g, v)])
            lines.append(f'  n{i} [label="{m.format(g)}|{v}\\nd={d}"];')
        for a, b, length in self.edges:
            lines.append(f'  {names[a]} -- {names[b]} [label="{format_scalar(length)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def develop(qg: QuotientGGraph, radius, cap: int | None = None) -> DevelopedBall:
    """Every developed vertex within ``radius`` of ``(1, basepoint)``."""
    radius = as_scalar(radius)
    if radius < 0:
        raise ValidationError("radius must be non-negative")
    oracle = _DistanceOracle(qg, cap=cap)
    inside = oracle.settle_radius(radius)
    m = qg.model
    verts = {(GroupElement(m.model_id, p), qg.vertices[v]): oracle._unscale(d) for (p, v), d in inside.items()}
    edges = []
    for (g, v) in sorted(verts, key=lambda k: (m.sort_key(k[0]), k[1])):
        for e in qg.edges:
            if e.tail != v:
                continue
            other = (m.multiply(g, e.voltage), e.head)
            if other in verts:
                edges.append(((g, v), other, e.length))
    return DevelopedBall(m, radius, verts, edges)


def covering_radius(qg: QuotientGGraph):
    """Largest distance from a point of the developed graph to the basepoint orbit.

    Orbit distance at a vertex over ``v`` is the quotient distance from ``v``
    to the basepoint; along an edge with endpoint orbit distances ``a, b`` and
    length ``len`` the maximum is ``(a + b + len) / 2``.
    """
    qg.check_connected()
    dist = qg.quotient_distances()
    best = None
    for e in qg.edges:
        r = (dist[e.tail] + dist[e.head] + e.length) / 2
        if best is None or r > best:
            best = r
    return best


@dataclass
class CompleteGraph:
    """Finite truncation of the complete graph on G with edge lengths l(g h^-1)."""

    model: GroupModel
    nodes: list
    weights: dict  # (i, j) -> l(nodes[i] nodes[j]^-1)

    def distances_from_identity(self) -> list:
        n = len(self.nodes)
        src = self.nodes.index(self.model.identity)
        dist: list = [None] * n
        dist[src] = Fraction(0)
        done = [False] * n
        for _ in range(n):
            u = None
            for i in range(n):
                if not done[i] and dist[i] is not None and (u is None or dist[i] < dist[u]):
                    u = i
            if u is None:
                break
            done[u] = True
            for v in range(n):
                if v != u and not done[v]:
                    nd = dist[u] + self.weights[(u, v)]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
        return dist


def complete_graph_truncation(l: LengthFunction, ball) -> CompleteGraph:
    """Build the truncated complete graph and check that it realises ``l``.

    Raises :class:`PreconditionError` with witness ``(g, h)`` when the path
    ``1 -> h -> g`` undercuts ``l(g)``, i.e. A3 fails for the pair
    ``(g h^-1, h^-1)``.
    """
    m = l.model
    nodes = m.sorted(set(ball))
    if m.identity not in nodes:
        raise ValidationError("ball must contain the identity")
    weights = {}
    for i, g in enumerate(nodes):
        for j, h in enumerate(nodes):
            if i != j:
                weights[(i, j)] = l(m.multiply(g, m.inverse(h)))
    cg = CompleteGraph(m, nodes, weights)
    dist = cg.distances_from_identity()
    for i, g in enumerate(nodes):
        if dist[i] < l(g):
            src = nodes.index(m.identity)
            for j, h in enumerate(nodes):
                if j not in (i, src) and l(h) + weights[(j, i)] < l(g):
                    raise PreconditionError(
                        f"A3 fails: l({m.format(g)}) exceeds the path through {m.format(h)}", witness=(g, h)
                    )
            raise PreconditionError(f"A3 fails: a path undercuts l({m.format(g)})", witness=(g, None))
    return cg
