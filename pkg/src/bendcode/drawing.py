"""Polyline drawings: labeled graphs drawn with bends on fixed points.

Provides the drawing validator (the planarity gate every generated instance
must pass), bend counting, triangulation of the augmented drawing into a
maximal planar straight-line graph, and the instance text format.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .geometry import (
    CrossKind,
    GeometryError,
    Point,
    Segment,
    crossing_kind,
    format_rational,
    point_on_segment,
    rational,
)
from .layers import PreconditionError, VertexMapping
from .triangulation import ExactTriangulation, triangulate_with_frame


class DrawingError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledGraph:
    """Simple undirected graph on labels 0..n-1."""

    n: int
    edges: frozenset

    @staticmethod
    def of(n: int, edges: Iterable) -> "LabeledGraph":
        norm = set()
        for u, v in edges:
            if u == v:
                raise DrawingError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DrawingError(f"edge ({u},{v}) out of range for n={n}")
            norm.add((min(u, v), max(u, v)))
        return LabeledGraph(n, frozenset(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list:
        adj = [[] for _ in range(self.n)]
        for u, v in sorted(self.edges):
            adj[u].append(v)
            adj[v].append(u)
        for a in adj:
            a.sort()
        return adj

    def max_degree(self) -> int:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return max(deg, default=0)

    def components(self) -> list:
        adj = self.adjacency()
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            comp = []
            stack = [start]
            seen[start] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1


@dataclass(frozen=True)
class Polyline:
    """Edge route: endpoint, bends..., endpoint."""

    points: tuple

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise DrawingError("polyline needs two endpoints")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise DrawingError(f"repeated consecutive polyline point {a}")

    @property
    def bends(self) -> tuple:
        return self.points[1:-1]

    def segments(self) -> list:
        return [Segment(a, b) for a, b in zip(self.points, self.points[1:])]

    def reversed(self) -> "Polyline":
        return Polyline(tuple(reversed(self.points)))


class PolylineDrawing:
    """A labeled planar graph, a vertex mapping, and one polyline per edge.

    Routes are stored in canonical direction (from the smaller label).
    Construction checks endpoints only; call validate_drawing for the full
    crossing-freeness check.
    """

    def __init__(self, graph: LabeledGraph, mapping: VertexMapping,
                 routes: Optional[Mapping] = None):
        if mapping.n != graph.n:
            raise DrawingError("mapping size does not match graph")
        self.graph = graph
        self.mapping = mapping
        self.routes = {}
        routes = dict(routes or {})
        for (u, v) in sorted(graph.edges):
            route = routes.pop((u, v), None)
            if route is None:
                route = routes.pop((v, u), None)
                if route is not None:
                    route = route.reversed()
            if route is None:
                route = Polyline((mapping.point(u), mapping.point(v)))
            if route.points[0] != mapping.point(u) or route.points[-1] != mapping.point(v):
                raise DrawingError(f"route for ({u},{v}) does not join its endpoints")
            self.routes[(u, v)] = route
        if routes:
            raise DrawingError(f"routes for non-edges: {sorted(routes)}")

    @property
    def beta(self) -> int:
        return count_bends(self)

    def route(self, u: int, v: int) -> Polyline:
        key = (min(u, v), max(u, v))
        r = self.routes[key]
        return r if u <= v else r.reversed()

    def restricted(self, labels: Sequence[int]) -> "PolylineDrawing":
        """Sub-drawing induced on a label subset, with labels compacted in
        sorted order; polylines of surviving edges are unchanged."""
        labs = sorted(labels)
        index = {lab: i for i, lab in enumerate(labs)}
        sub_edges = [(index[u], index[v]) for (u, v) in self.graph.edges
                     if u in index and v in index]
        sub_graph = LabeledGraph.of(len(labs), sub_edges)
        sub_map = VertexMapping(tuple(self.mapping.point(lab) for lab in labs))
        sub_routes = {}
        for (u, v) in self.graph.edges:
            if u in index and v in index:
                a, b = index[u], index[v]
                key = (min(a, b), max(a, b))
                route = self.routes[(min(u, v), max(u, v))]
                if (a < b) != (u < v):
                    route = route.reversed()
                sub_routes[key] = route
        return PolylineDrawing(sub_graph, sub_map, sub_routes)


def count_bends(d: PolylineDrawing) -> int:
    """Total number of interior points over all edge polylines."""
    return sum(len(r.points) - 2 for r in d.routes.values())


@dataclass(frozen=True)
class Violation:
    kind: str           # "cross" | "overlap" | "touch" | "through-vertex" | "self"
    edges: tuple        # offending edge pair (or single edge twice)
    point: Optional[Point]

    def __bool__(self):
        return False  # a Violation is falsy; OK is truthy


OK = True


def _float_bbox(seg: Segment):
    xs = (float(seg.a.x), float(seg.b.x))
    ys = (float(seg.a.y), float(seg.b.y))
    pad = 1e-9 * (1.0 + max(abs(xs[0]), abs(xs[1]), abs(ys[0]), abs(ys[1])))
    return min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad


class _SegmentGrid:
    """Float-keyed bucket grid for candidate pairs; verdicts stay exact."""

    def __init__(self, items):
        boxes = [(_float_bbox(seg), payload) for seg, payload in items]
        spans = [max(x1 - x0, y1 - y0) for (x0, x1, y0, y1), _ in boxes] or [1.0]
        spans.sort()
        self.cell = max(spans[len(spans) // 2], 1e-6)
        self.grid = {}
        self.items = []
        for (box, payload) in boxes:
            idx = len(self.items)
            self.items.append(payload)
            x0, x1, y0, y1 = box
            for cx in range(int(x0 // self.cell), int(x1 // self.cell) + 1):
                for cy in range(int(y0 // self.cell), int(y1 // self.cell) + 1):
                    self.grid.setdefault((cx, cy), []).append(idx)

    def candidate_pairs(self):
        seen = set()
        for bucket in self.grid.values():
            for i in range(len(bucket)):
                for j in range(i + 1, len(bucket)):
                    pair = (min(bucket[i], bucket[j]), max(bucket[i], bucket[j]))
                    if pair not in seen:
                        seen.add(pair)
                        yield self.items[pair[0]], self.items[pair[1]]

    def candidates_near_point(self, p: Point):
        x, y = float(p.x), float(p.y)
        out = set()
        cx, cy = int(x // self.cell), int(y // self.cell)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                out.update(self.grid.get((cx + dx, cy + dy), ()))
        return [self.items[i] for i in sorted(out)]


def _touch_only_at(s1: Segment, s2: Segment, p: Point) -> bool:
    for q, s in ((s1.a, s2), (s1.b, s2), (s2.a, s1), (s2.b, s1)):
        if point_on_segment(q, s) and q != p:
            return False
    return True


def validate_drawing(d: PolylineDrawing):
    """OK (truthy) iff the drawing is a plane embedding:

    * polylines of distinct edges meet only at a shared endpoint vertex,
    * no polyline passes through any mapped vertex point besides its own
      endpoints, and
    * no polyline self-intersects (consecutive segments share exactly the
      bend point).

    Returns a falsy Violation value otherwise.
    """
    items = []
    for (u, v), route in sorted(d.routes.items()):
        for k, seg in enumerate(route.segments()):
            items.append((seg, ((u, v), k, seg)))

    # self-intersection: consecutive segments of one polyline must meet only
    # at the shared bend; non-consecutive ones not at all
    for (u, v), route in sorted(d.routes.items()):
        segs = route.segments()
        for i in range(len(segs)):
            for j in range(i + 1, len(segs)):
                kind = crossing_kind(segs[i], segs[j])
                if j == i + 1:
                    if kind is CrossKind.OVERLAP:
                        return Violation("self", ((u, v), (u, v)), segs[i].b)
                    if kind is CrossKind.TOUCH and not _touch_only_at(
                            segs[i], segs[j], segs[i].b):
                        return Violation("self", ((u, v), (u, v)), segs[i].b)
                    if kind is CrossKind.PROPER_CROSS:
                        return Violation("self", ((u, v), (u, v)), None)
                elif kind is not CrossKind.DISJOINT:
                    return Violation("self", ((u, v), (u, v)), None)

    grid = _SegmentGrid(items)
    for (e1, k1, s1), (e2, k2, s2) in grid.candidate_pairs():
        if e1 == e2:
            continue  # handled above
        kind = crossing_kind(s1, s2)
        if kind is CrossKind.DISJOINT:
            continue
        if kind is CrossKind.PROPER_CROSS:
            from .geometry import segment_intersection_point

            return Violation("cross", (e1, e2), segment_intersection_point(s1, s2))
        if kind is CrossKind.OVERLAP:
            return Violation("overlap", (e1, e2), None)
        shared = set(e1) & set(e2)
        if not shared:
            return Violation("touch", (e1, e2), None)
        p_shared = d.mapping.point(next(iter(shared)))
        if not _touch_only_at(s1, s2, p_shared):
            return Violation("touch", (e1, e2), p_shared)

    # no polyline may pass through a mapped vertex point other than its ends
    for lab in range(d.mapping.n):
        p = d.mapping.point(lab)
        for (edge, k, seg) in grid.candidates_near_point(p):
            u, v = edge
            route = d.routes[edge]
            if point_on_segment(p, seg):
                is_start = lab == u and k == 0 and p == seg.a
                is_end = lab == v and k == len(route.points) - 2 and p == seg.b
                if not (is_start or is_end):
                    return Violation("through-vertex", (edge, (lab, lab)), p)
    return OK


@dataclass
class TriangulatedAugmentation:
    """Maximal planar straight-line graph over originals + bends + 3 frame
    corners, with the paper-weighting (originals 1/n, auxiliaries 0)."""

    points: list            # Point per vertex; originals, bends, corners
    n_original: int
    vertex_kind: list       # ("orig", label) | ("bend", edge, k) | ("corner", i)
    triangles: list         # CCW vertex triples
    neighbors: list         # per triangle, ids across edge opposite vertex i; -1 = outer
    edges: set              # undirected vertex pairs (a < b)
    weights: list           # Fraction per vertex

    @property
    def v(self) -> int:
        return len(self.points)

    def original_labels(self) -> list:
        return [i for i, k in enumerate(self.vertex_kind) if k[0] == "orig"]

    def adjacency(self) -> list:
        adj = [set() for _ in range(self.v)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return [sorted(s) for s in adj]


def planarize_and_triangulate(d: PolylineDrawing) -> TriangulatedAugmentation:
    """Bends become vertices; a bounding triangle is added; every face is
    triangulated.  Output has n + beta + 3 vertices and exactly 3v - 6 edges.
    """
    check = validate_drawing(d)
    if not check:
        raise PreconditionError(f"drawing invalid: {check}")
    pts = list(d.mapping.points)
    kinds = [("orig", lab) for lab in range(d.mapping.n)]
    chains = []
    for (u, v) in sorted(d.routes):
        route = d.routes[(u, v)]
        chain = [u]
        for k, bend in enumerate(route.bends):
            chain.append(len(pts))
            pts.append(bend)
            kinds.append(("bend", (u, v), k))
        chain.append(v)
        chains.append(chain)
    segments = [(c[i], c[i + 1]) for c in chains for i in range(len(c) - 1)]
    tri = triangulate_with_frame(pts, segments)
    if tri.input_index != list(range(len(pts) + 3)):
        raise DrawingError("coincident drawing points; validation should have caught this")
    kinds.extend(("corner", i) for i in range(3))
    n = d.mapping.n
    weights = [Fraction(1, n) if k[0] == "orig" else Fraction(0) for k in kinds]

    ids = tri.triangle_ids()
    compact = {t: i for i, t in enumerate(ids)}
    triangles = [tuple(tri.tv[t]) for t in ids]
    neighbors = [tuple(compact.get(x, -1) for x in tri.tn[t]) for t in ids]
    aug = TriangulatedAugmentation(
        points=tri.points,
        n_original=n,
        vertex_kind=kinds,
        triangles=triangles,
        neighbors=neighbors,
        edges=tri.edges(),
        weights=weights,
    )
    v = aug.v
    assert v == n + count_bends(d) + 3
    assert len(aug.edges) == 3 * v - 6, (len(aug.edges), 3 * v - 6)
    return aug


# -- instance text format -----------------------------------------------------

def emit_instance(d: PolylineDrawing, meta: Optional[dict] = None) -> str:
    """Serialize a drawing; parse(emit(x)) == emit-identical text."""
    doc = {
        "n": d.graph.n,
        "points": [[format_rational(p.x), format_rational(p.y)]
                   for p in d.mapping.points],
        "edges": [[u, v] for (u, v) in sorted(d.graph.edges)],
    }
    routes = {}
    for (u, v) in sorted(d.routes):
        bends = d.routes[(u, v)].bends
        if bends:
            routes[f"{u}-{v}"] = [[format_rational(p.x), format_rational(p.y)]
                                  for p in bends]
    if routes:
        doc["routes"] = routes
    if meta:
        doc["meta"] = meta
    return json.dumps(doc, indent=1, sort_keys=True)


def parse_instance(text: str):
    """Parse the instance format; returns (PolylineDrawing, meta dict)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DrawingError(f"instance file is not valid JSON: {exc}") from exc
    try:
        n = int(doc["n"])
        pts = tuple(Point(rational(x), rational(y)) for x, y in doc["points"])
        edges = [(int(u), int(v)) for u, v in doc["edges"]]
    except (KeyError, TypeError, ValueError, GeometryError) as exc:
        raise DrawingError(f"malformed instance file: {exc}") from exc
    if len(pts) != n:
        raise DrawingError(f"point list length {len(pts)} != n = {n}")
    mapping = VertexMapping(pts)
    graph = LabeledGraph.of(n, edges)
    routes = {}
    for key, bends in (doc.get("routes") or {}).items():
        try:
            u, v = (int(x) for x in key.split("-"))
        except ValueError as exc:
            raise DrawingError(f"bad route key {key!r}") from exc
        interior = tuple(Point(rational(x), rational(y)) for x, y in bends)
        routes[(u, v)] = Polyline((mapping.point(u),) + interior + (mapping.point(v),))
    return PolylineDrawing(graph, mapping, routes), doc.get("meta") or {}
