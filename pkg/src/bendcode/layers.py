"""Convex layer diagrams (onion peeling) and support-vertex identification.

A convex layer diagram nests the convex hulls obtained by repeatedly peeling
a point set.  A line segment crossing at least two layer boundaries can be
identified by an ordered pair of *support vertices*: the decoding direction
rebuilds the crossed-edge set from just that pair.

The decoding direction is exact and symbolic: the line through the pair is
rotated clockwise about the first vertex by an infinitesimal angle and then
translated right by a second-order infinitesimal.  Predicate signs are
evaluated lexicographically over the monomials (1, t, delta, t*delta), so no
numeric perturbation is ever needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .geometry import (
    CCW,
    GeometryError,
    Point,
    Segment,
    convex_hull,
    crossing_kind,
    CrossKind,
    orient,
    point_on_segment,
)


class PreconditionError(ValueError):
    """An operation was called outside its stated precondition."""


class SupportPairNotFound(RuntimeError):
    """No ordered vertex pair reproduces the crossed-edge set.

    Surfaced rather than guessed around; callers may fall back to a more
    explicit encoding.
    """


@dataclass(frozen=True)
class VertexMapping:
    """Injective map from vertex labels 0..n-1 to exact points."""

    points: tuple

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 1:
            raise PreconditionError("mapping needs at least one point")
        if len({(p.x, p.y) for p in pts}) != len(pts):
            raise PreconditionError("mapping must be injective")

    @property
    def n(self) -> int:
        return len(self.points)

    def point(self, label: int) -> Point:
        return self.points[label]


class LayerKind(Enum):
    POLYGON = "polygon"
    SEGMENT = "segment"      # collinear layer: 2+ points on one line
    SINGLETON = "singleton"


@dataclass(frozen=True)
class Layer:
    kind: LayerKind
    labels: tuple  # canonical order (see build_convex_layers)


@dataclass(frozen=True)
class LayerEdge:
    layer: int   # 0 = outermost
    index: int   # position within the layer's canonical edge order
    a: int       # tail label, canonical direction
    b: int       # head label

    def key(self):
        return (self.layer, self.index)


@dataclass(frozen=True)
class SupportPair:
    first: int   # rotation pivot
    second: int

    def __post_init__(self):
        if self.first == self.second:
            raise PreconditionError("support pair must be two distinct labels")


class ConvexLayerDiagram:
    """Onion-peeling layers over a vertex mapping, with the canonical
    layer-edge enumeration (outermost layer first; within a layer starting at
    the lexicographically smallest point, counterclockwise)."""

    def __init__(self, mapping: VertexMapping, layers: Sequence[Layer]):
        self.mapping = mapping
        self.layers = tuple(layers)
        self.edges: tuple = tuple(self._enumerate_edges())
        self.label_layer = {}
        for li, layer in enumerate(self.layers):
            for lab in layer.labels:
                self.label_layer[lab] = li
        # integer-scaled coordinates for fast exact predicates
        dens = [1]
        for p in mapping.points:
            dens.append(p.x.denominator)
            dens.append(p.y.denominator)
        scale = 1
        for d in dens:
            scale = scale * d // gcd(scale, d)
        self._scale = scale
        self._ix = [int(p.x * scale) for p in mapping.points]
        self._iy = [int(p.y * scale) for p in mapping.points]

    def _enumerate_edges(self):
        for li, layer in enumerate(self.layers):
            labs = layer.labels
            if layer.kind is LayerKind.POLYGON:
                k = len(labs)
                for i in range(k):
                    yield LayerEdge(li, i, labs[i], labs[(i + 1) % k])
            elif layer.kind is LayerKind.SEGMENT:
                for i in range(len(labs) - 1):
                    yield LayerEdge(li, i, labs[i], labs[i + 1])

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    def layer_of(self, label: int) -> int:
        return self.label_layer[label]

    def edge_segment(self, e: LayerEdge) -> Segment:
        return Segment(self.mapping.point(e.a), self.mapping.point(e.b))

    def polygon_layer_indices(self) -> list:
        return [i for i, l in enumerate(self.layers) if l.kind is LayerKind.POLYGON]

    def is_layer_vertex(self, label: int) -> bool:
        return 0 <= label < self.mapping.n


def _rotate_to_lex_min(labels: list, pts: dict) -> list:
    best = min(range(len(labels)), key=lambda i: pts[labels[i]].key())
    return labels[best:] + labels[:best]


def build_convex_layers(m: VertexMapping) -> ConvexLayerDiagram:
    """Deterministic onion peeling.

    Points collinear on a hull boundary belong to that layer (hull edges are
    subdivided), so the layers partition the labels exactly.  A fully
    collinear residue becomes a SEGMENT layer; a single point a SINGLETON.
    """
    remaining = set(range(m.n))
    pt = {lab: m.point(lab) for lab in range(m.n)}
    by_point = {(p.x, p.y): lab for lab, p in pt.items()}
    layers = []
    while remaining:
        pts = [pt[lab] for lab in remaining]
        hull = convex_hull(pts)
        if len(hull) == 1:
            layers.append(Layer(LayerKind.SINGLETON,
                                (by_point[(hull[0].x, hull[0].y)],)))
            remaining.clear()
            continue
        if len(hull) == 2:
            # every remaining point lies on one line: order along it
            a = hull[0]
            ordered = sorted(remaining, key=lambda lab: pt[lab].key())
            layers.append(Layer(LayerKind.SEGMENT, tuple(ordered)))
            remaining.clear()
            continue
        boundary = []
        k = len(hull)
        for i in range(k):
            a, b = hull[i], hull[(i + 1) % k]
            boundary.append(by_point[(a.x, a.y)])
            on_edge = [lab for lab in remaining
                       if pt[lab] != a and pt[lab] != b
                       and point_on_segment(pt[lab], Segment(a, b))]
            on_edge.sort(key=lambda lab: ((pt[lab].x - a.x) ** 2 + (pt[lab].y - a.y) ** 2))
            boundary.extend(on_edge)
        boundary = _rotate_to_lex_min(boundary, pt)
        layers.append(Layer(LayerKind.POLYGON, tuple(boundary)))
        remaining.difference_update(boundary)
    return ConvexLayerDiagram(m, layers)


def crossed_layer_edges(s: Segment, diagram: ConvexLayerDiagram) -> list:
    """All layer edges properly crossed by s, ordered along s (from s.a).

    This is the brute-force oracle for the support-vertex identification.
    Asserts that no layer boundary is crossed more than twice.
    """
    dx = s.b.x - s.a.x
    dy = s.b.y - s.a.y
    hits = []
    per_layer = {}
    for e in diagram.edges:
        seg = diagram.edge_segment(e)
        if crossing_kind(s, seg) is CrossKind.PROPER_CROSS:
            ex = seg.b.x - seg.a.x
            ey = seg.b.y - seg.a.y
            denom = dx * ey - dy * ex
            t = ((seg.a.x - s.a.x) * ey - (seg.a.y - s.a.y) * ex) / denom
            hits.append((t, e))
            per_layer[e.layer] = per_layer.get(e.layer, 0) + 1
    for layer, count in per_layer.items():
        if count > 2:
            raise AssertionError(
                f"segment crosses layer {layer} boundary {count} times; "
                "convexity bounds this at 2")
    hits.sort(key=lambda te: (te[0], te[1].key()))
    return [e for _, e in hits]


def _sign4(c0, c1, c2, c3) -> int:
    for c in (c0, c1, c2, c3):
        if c > 0:
            return 1
        if c < 0:
            return -1
    return 0


class _PerturbedLine:
    """The symbolic decode line: through (first, second), rotated clockwise
    about first by infinitesimal t, then translated +x by infinitesimal
    delta, with 0 < delta << t**k << 1 for every k.

    Every predicate reduces to the sign of a polynomial in (t, delta) that is
    affine in each variable; signs are read off lexicographically over the
    monomials (1, t, delta, t*delta)."""

    def __init__(self, diagram: ConvexLayerDiagram, first: int, second: int):
        ix, iy = diagram._ix, diagram._iy
        self.ix, self.iy = ix, iy
        self.vx, self.vy = ix[first], iy[first]
        self.dx = ix[second] - self.vx
        self.dy = iy[second] - self.vy

    def side_of(self, label: int) -> int:
        """Which side of the perturbed line a layer vertex lies on.

        Never zero: the perturbation pushes the line off every vertex.
        """
        ex = self.ix[label] - self.vx
        ey = self.iy[label] - self.vy
        return _sign4(self.dx * ey - self.dy * ex,
                      self.dx * ex + self.dy * ey,
                      self.dy,
                      -self.dx)

    def crosses(self, e: LayerEdge) -> bool:
        return self.side_of(e.a) != self.side_of(e.b)

    def _param_parts(self, e: LayerEdge):
        """Crossing parameter of a crossed edge along the line, as the exact
        quotient (n0 + nd*delta) / (m0 + mt*t)."""
        ax, ay = self.ix[e.a], self.iy[e.a]
        bx_, by_ = self.ix[e.b] - ax, self.iy[e.b] - ay
        n0 = (ax - self.vx) * by_ - (ay - self.vy) * bx_
        nd = -by_
        m0 = self.dx * by_ - self.dy * bx_
        mt = self.dx * bx_ + self.dy * by_
        return n0, nd, m0, mt

    def param_compare(self, e1: LayerEdge, e2: LayerEdge) -> int:
        """Order of two crossed edges' crossing points along the line."""
        if e1 == e2:
            return 0
        n1, d1, m1, t1 = self._param_parts(e1)
        n2, d2, m2, t2 = self._param_parts(e2)
        # sign(n1/m1 - n2/m2) = sign(n1*m2 - n2*m1) * sign(m1) * sign(m2)
        c1 = n1 * m2 - n2 * m1
        ct = n1 * t2 - n2 * t1
        cd = d1 * m2 - d2 * m1
        ctd = d1 * t2 - d2 * t1
        s = _sign4(c1, ct, cd, ctd)
        s *= _sign4(m1, t1, 0, 0)
        s *= _sign4(m2, t2, 0, 0)
        return s


def recover_crossings(pair: SupportPair, diagram: ConvexLayerDiagram) -> set:
    """The crossed-edge set determined by the pair, decoded symbolically.

    The line through the pair is rotated back clockwise about pair.first by
    an infinitesimal angle and translated right; its exact crossings with
    every layer edge form the unique set the encoding direction committed to.
    """
    n = diagram.mapping.n
    if not (0 <= pair.first < n and 0 <= pair.second < n):
        raise PreconditionError("support pair labels must be layer vertices")
    line = _PerturbedLine(diagram, pair.first, pair.second)
    return {e for e in diagram.edges if line.crosses(e)}


def _matching_pair(diagram: ConvexLayerDiagram, candidates, target: set):
    edges = diagram.edges
    for first in candidates:
        for second in candidates:
            if first == second:
                continue
            line = _PerturbedLine(diagram, first, second)
            ok = True
            for e in edges:
                if line.crosses(e) != (e in target):
                    ok = False
                    break
            if ok:
                return SupportPair(first, second)
    return None


def support_pair(s: Segment, diagram: ConvexLayerDiagram) -> SupportPair:
    """Canonical support pair for a segment crossing >= 2 layer boundaries.

    Scans ordered vertex pairs in lexicographic label order -- vertices
    incident to crossed edges first, then all remaining layer vertices -- and
    returns the first pair whose recovery reproduces the brute-force crossed
    set exactly.  A pair of two labels carries exactly the information of a
    line, so segments whose crossed set differs from their supporting line's
    (possible when an endpoint stops inside the diagram) may have no valid
    pair; that case is surfaced as SupportPairNotFound, never guessed.
    """
    crossed = crossed_layer_edges(s, diagram)
    boundaries = {e.layer for e in crossed}
    if len(boundaries) < 2:
        raise PreconditionError(
            f"segment crosses {len(boundaries)} layer boundaries; need >= 2")
    target = set(crossed)
    incident = sorted({lab for e in crossed for lab in (e.a, e.b)})
    found = _matching_pair(diagram, incident, target)
    if found is None:
        incident_set = set(incident)
        rest = [lab for lab in range(diagram.mapping.n) if lab not in incident_set]
        found = _matching_pair(diagram, rest, target)
        if found is None:
            found = _matching_pair_mixed(diagram, incident, rest, target)
    if found is None:
        raise SupportPairNotFound(
            f"no vertex pair reproduces the {len(target)} crossed edges")
    return found


def _matching_pair_mixed(diagram, group_a, group_b, target):
    edges = diagram.edges
    for first in group_a:
        for second in group_b:
            for f, s in ((first, second), (second, first)):
                line = _PerturbedLine(diagram, f, s)
                ok = True
                for e in edges:
                    if line.crosses(e) != (e in target):
                        ok = False
                        break
                if ok:
                    return SupportPair(f, s)
    return None
