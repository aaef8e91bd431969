"""Instance generators: point sets, uniform random labeled trees, random
triangulations, straight-line embeddings, and incremental crossing-free
routing on arbitrary fixed mappings.

Everything is seed-driven and deterministic: the same spec produces the
byte-identical instance.  The PRNG is the stock Mersenne Twister
("mt19937-py", recorded in instance metadata); child seeds are derived by
hashing (seed, purpose) so the streams are independent.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import Point, convex_hull
from .layers import VertexMapping
from .drawing import LabeledGraph, Polyline, PolylineDrawing, validate_drawing
from .routing import Router, RoutingError
from .triangulation import ExactTriangulation, frame_triangle

RNG_NAME = "mt19937-py"

DISTRIBUTIONS = ("uniform", "convex", "grid")
FAMILIES = ("tree", "path", "triangulation")


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    family: str          # tree | path | triangulation
    n: int
    distribution: str    # uniform | convex | grid (ignored for triangulation)
    seed: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GenerationError(f"unknown family {self.family!r}")
        if self.distribution not in DISTRIBUTIONS:
            raise GenerationError(f"unknown distribution {self.distribution!r}")
        if self.n < 1:
            raise GenerationError("n must be positive")

    def meta(self) -> dict:
        return {"family": self.family, "n": self.n,
                "distribution": self.distribution, "seed": self.seed,
                "rng": RNG_NAME}


def child_seed(seed: int, tag: str) -> int:
    digest = hashlib.sha256(f"{seed}:{tag}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def random_points(n: int, distribution: str, seed: int) -> VertexMapping:
    """Pairwise-distinct exact-rational points.

    uniform: jittered grid cells (avoids collinear triples cheaply without
    assuming general position); convex: rational points on the unit circle;
    grid: the integer lattice, degeneracies very much included.
    """
    if n < 1:
        raise GenerationError("n must be positive")
    rng = random.Random(seed)
    if distribution == "grid":
        g = 1
        while g * g < n:
            g += 1
        pts = [Point(Fraction(i % g), Fraction(i // g)) for i in range(n)]
        return VertexMapping(tuple(pts))
    if distribution == "convex":
        # x = (1-t^2)/(1+t^2), y = 2t/(1+t^2): distinct t gives distinct
        # points in convex position on the unit circle
        ts = set()
        while len(ts) < n:
            ts.add(Fraction(rng.randint(-8 * n, 8 * n), rng.randint(1, 7)))
        pts = []
        for t in sorted(ts):
            den = 1 + t * t
            pts.append(Point((1 - t * t) / den, 2 * t / den))
        return VertexMapping(tuple(pts))
    if distribution == "uniform":
        g = 1
        while g * g < n:
            g += 1
        cells = list(range(g * g))
        rng.shuffle(cells)
        pts = []
        for cell in cells[:n]:
            cx, cy = cell % g, cell // g
            jx = Fraction(rng.randint(1, 63), 64)
            jy = Fraction(rng.randint(1, 63), 64)
            pts.append(Point(cx + jx, cy + jy))
        return VertexMapping(tuple(pts))
    raise GenerationError(f"unknown distribution {distribution!r}")


def random_tree(n: int, seed: int) -> LabeledGraph:
    """Uniform over the n^(n-2) labeled trees (decoded from a uniform
    random sequence via the standard bijection)."""
    if n < 1:
        raise GenerationError("n must be positive")
    if n == 1:
        return LabeledGraph.of(1, [])
    if n == 2:
        return LabeledGraph.of(2, [(0, 1)])
    rng = random.Random(seed)
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    import heapq

    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return LabeledGraph.of(n, edges)


def path_graph(n: int) -> LabeledGraph:
    return LabeledGraph.of(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> LabeledGraph:
    if n < 3:
        raise GenerationError("cycle needs n >= 3")
    return LabeledGraph.of(n, [(i, (i + 1) % n) for i in range(n)])


def random_triangulation(n: int, seed: int):
    """Triangulation of a jittered random point set: a maximal planar graph
    inside its hull with a valid straight-line beta=0 drawing.

    Not uniform over labeled planar graphs; it only supplies beta=0
    instances.  Returns (LabeledGraph, VertexMapping).
    """
    if n < 3:
        raise GenerationError("triangulation needs n >= 3")
    m = random_points(n, "uniform", child_seed(seed, "points"))
    pts = list(m.points)
    tri = ExactTriangulation(pts + list(frame_triangle(pts)),
                             frame=(n, n + 1, n + 2))
    hull = convex_hull(pts)
    hull_idx = [tri.index_of(p) for p in hull]
    if len(hull_idx) < 3:
        raise GenerationError("degenerate point set (all collinear)")
    for i in range(len(hull_idx)):
        tri.insert_constraint_chain(hull_idx[i], hull_idx[(i + 1) % len(hull_idx)])
    corners = {n, n + 1, n + 2}
    edges = {(a, b) for (a, b) in tri.edges()
             if a not in corners and b not in corners}
    # drop edges strictly outside the hull: those live in corner triangles,
    # so any non-corner edge of a corner-free triangle is inside
    keep = set()
    for (a, b, c) in tri.triangles():
        tri_set = {a, b, c}
        if tri_set & corners:
            continue
        for u, v in ((a, b), (b, c), (c, a)):
            keep.add((min(u, v), max(u, v)))
    graph = LabeledGraph.of(n, sorted(keep))
    return graph, m


def straightline_instance(g: LabeledGraph):
    """A beta=0 valid straight-line drawing for a connected planar graph.

    Trees and forests are placed on a convex arc in preorder (tree chords
    over convex position never interleave).  Other planar graphs get a
    combinatorial embedding and a barycentric layout on a pinned outer face,
    solved in floats, snapped to rationals, and validated exactly.
    """
    if not g.is_connected():
        raise GenerationError("straightline_instance needs a connected graph")
    adj = g.adjacency()
    is_forest = g.m == g.n - 1
    if is_forest:
        order = []
        seen = [False] * g.n
        stack = [0]
        seen[0] = True
        while stack:
            v = stack.pop()
            order.append(v)
            for w in reversed(adj[v]):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        pos = [None] * g.n
        mapping_pts = _convex_arc(g.n)
        for idx, v in enumerate(order):
            pos[v] = mapping_pts[idx]
        m = VertexMapping(tuple(pos))
        d = PolylineDrawing(g, m)
        check = validate_drawing(d)
        if not check:
            raise GenerationError(f"convex tree layout failed: {check}")
        return m, d
    return _tutte_instance(g)


def _convex_arc(n: int) -> list:
    pts = []
    for i in range(n):
        t = Fraction(i, max(n, 2)) - Fraction(1, 2)  # t in [-1/2, 1/2)
        den = 1 + t * t
        pts.append(Point(1024 * (1 - t * t) / den, 1024 * 2 * t / den))
    return pts


def _tutte_instance(g: LabeledGraph):
    import networkx as nx

    gx = nx.Graph()
    gx.add_nodes_from(range(g.n))
    gx.add_edges_from(g.edges)
    ok, embedding = nx.check_planarity(gx)
    if not ok:
        raise GenerationError("graph is not planar")
    # pick the largest face as the outer face
    faces = []
    seen_half = set()
    for u in embedding:
        for v in embedding[u]:
            if (u, v) in seen_half:
                continue
            face = embedding.traverse_face(u, v, mark_half_edges=seen_half)
            faces.append(face)
    outer = max(faces, key=len)
    adj = g.adjacency()
    for precision in (20, 40, 60):
        pos = _tutte_solve(g.n, adj, outer, precision)
        if pos is None:
            continue
        try:
            m = VertexMapping(tuple(pos))
        except Exception:
            continue
        d = PolylineDrawing(g, m)
        if validate_drawing(d):
            return m, d
    raise GenerationError("barycentric layout failed exact validation")


def _tutte_solve(n: int, adj, outer, precision: int):
    k = len(outer)
    fixed = {}
    import math

    for i, v in enumerate(outer):
        ang = 2 * math.pi * i / k
        fixed[v] = (math.cos(ang), math.sin(ang))
    free = [v for v in range(n) if v not in fixed]
    index = {v: i for i, v in enumerate(free)}
    size = len(free)
    if size:
        a = [[0.0] * size for _ in range(size)]
        bx = [0.0] * size
        by = [0.0] * size
        for v in free:
            i = index[v]
            deg = len(adj[v])
            a[i][i] = float(deg)
            for w in adj[v]:
                if w in fixed:
                    bx[i] += fixed[w][0]
                    by[i] += fixed[w][1]
                else:
                    a[i][index[w]] -= 1.0
        sol_x = _gauss(a, bx)
        sol_y = _gauss([row[:] for row in a], by) if sol_x is not None else None
        # _gauss mutates its matrix; recompute for y
        if sol_x is None or sol_y is None:
            return None
    pos = [None] * n
    den = 1 << precision
    for v in range(n):
        if v in fixed:
            x, y = fixed[v]
        else:
            x, y = sol_x[index[v]], sol_y[index[v]]
        pos[v] = Point(Fraction(round(x * den), den), Fraction(round(y * den), den))
    return pos


def _gauss(a, b):
    n = len(b)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if abs(a[piv][col]) < 1e-12:
            return None
        a[col], a[piv] = a[piv], a[col]
        b[col], b[piv] = b[piv], b[col]
        inv = 1.0 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f == 0.0:
                continue
            for c in range(col, n):
                a[r][c] -= f * a[col][c]
            b[r] -= f * b[col]
    x = [0.0] * n
    for r in range(n - 1, -1, -1):
        s = b[r] - sum(a[r][c] * x[c] for c in range(r + 1, n))
        x[r] = s / a[r][r]
    return x


def route_graph(g: LabeledGraph, m: VertexMapping) -> PolylineDrawing:
    """Incremental crossing-free routing of a graph with max degree <= 2 or
    any forest: spanning-forest edges first in BFS order, then cycle-closing
    edges.  Every edge is routed through the complement of what is drawn."""
    adj = g.adjacency()
    forest_edges = []
    closers = []
    seen = [False] * g.n
    in_forest = set()
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            v = queue.pop(0)
            for w in adj[v]:
                key = (min(v, w), max(v, w))
                if not seen[w]:
                    seen[w] = True
                    in_forest.add(key)
                    forest_edges.append(key)
                    queue.append(w)
    closers = [e for e in sorted(g.edges) if e not in in_forest]
    router = Router(m)
    routes = {}
    for (u, v) in forest_edges + closers:
        routes[(u, v)] = router.route_edge(u, v)
    return PolylineDrawing(g, m, routes)


def route_incremental(t: LabeledGraph, m: VertexMapping) -> PolylineDrawing:
    """Route a tree or forest on an arbitrary mapping (BFS edge order)."""
    if t.m >= t.n and t.n > 0:
        # has a cycle; still routable for max-degree-2 graphs
        if t.max_degree() > 2:
            raise GenerationError("route_incremental expects a forest or max degree 2")
    return route_graph(t, m)


def generate(spec: InstanceSpec) -> PolylineDrawing:
    """Instance from a spec: deterministic, same spec -> identical instance."""
    if spec.family == "triangulation":
        graph, m = random_triangulation(spec.n, child_seed(spec.seed, "tri"))
        return PolylineDrawing(graph, m)
    m = random_points(spec.n, spec.distribution, child_seed(spec.seed, "points"))
    if spec.family == "tree":
        g = random_tree(spec.n, child_seed(spec.seed, "tree"))
    elif spec.family == "path":
        g = path_graph(spec.n)
    else:
        raise GenerationError(f"unsupported family {spec.family}")
    return route_graph(g, m)
