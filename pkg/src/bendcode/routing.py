"""Crossing-free incremental edge routing on a fixed vertex mapping.

Each new edge is routed through the complement of the partial drawing: a
constrained triangulation of everything drawn so far supplies a corridor
(dual-graph search crossing only unconstrained edges), the funnel algorithm
pulls the corridor taut, and the taut corners -- which by construction touch
obstacle vertices -- are nudged off them by exact dyadic offsets.  A drawn
forest never disconnects the plane, so a corridor always exists while the
partial drawing is acyclic; single cycle-closing edges stay routable because
a closed component cannot separate the endpoints of its own closing edge.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import (
    CrossKind,
    Point,
    Segment,
    crossing_kind,
    point_on_segment,
)
from .layers import VertexMapping
from .drawing import Polyline, _SegmentGrid
from .triangulation import ExactTriangulation, frame_triangle


class RoutingError(RuntimeError):
    pass


def _perp_left(vx, vy):
    return (-vy, vx)


def _perp_right(vx, vy):
    return (vy, -vx)


def _dyadic_shrink(vx: Fraction, vy: Fraction, target: Fraction):
    """Scale (vx, vy) by a power of two so its L-infinity norm is in
    (target/2, target]."""
    m = max(abs(vx), abs(vy))
    if m == 0:
        return Fraction(0), Fraction(0)
    scale = Fraction(1)
    while m * scale > target:
        scale /= 2
    while m * scale * 2 <= target:
        scale *= 2
    return vx * scale, vy * scale


def _linf(p: Point, q: Point) -> Fraction:
    return max(abs(p.x - q.x), abs(p.y - q.y))


def _dyadic_snap(vx: Fraction, vy: Fraction):
    """Round a direction onto the 2^-16 grid (keeps bend-point denominators
    from compounding across routing generations)."""
    fx, fy = float(vx), float(vy)
    m = max(abs(fx), abs(fy))
    if m == 0:
        return Fraction(vx), Fraction(vy)
    sx = Fraction(round(fx / m * 65536), 65536)
    sy = Fraction(round(fy / m * 65536), 65536)
    if sx == 0 and sy == 0:
        return Fraction(vx), Fraction(vy)
    return sx, sy


class Router:
    """Routes edges one at a time over a fixed mapping, keeping the partial
    drawing crossing-free."""

    def __init__(self, mapping: VertexMapping):
        self.mapping = mapping
        pts = list(mapping.points)
        fa, fb, fc = frame_triangle(pts)
        self.tri = ExactTriangulation(pts + [fa, fb, fc],
                                      frame=(len(pts), len(pts) + 1, len(pts) + 2))
        self.obstacle_segments: list = []   # (Segment, edge)
        self.routes: dict = {}
        self._grid_dirty = True
        self._grid: Optional[_SegmentGrid] = None

    # -- obstacle bookkeeping ---------------------------------------------------

    def _grid_now(self) -> _SegmentGrid:
        if self._grid_dirty or self._grid is None:
            self._grid = _SegmentGrid(
                [(seg, (seg, edge)) for seg, edge in self.obstacle_segments])
            self._grid_dirty = False
        return self._grid

    def _register(self, u: int, v: int, poly: Polyline):
        key = (min(u, v), max(u, v))
        self.routes[key] = poly if u <= v else poly.reversed()
        idxs = [self.tri.add_point(p) for p in poly.points]
        for a, b in zip(idxs, idxs[1:]):
            self.tri.insert_constraint(a, b)
        for seg in poly.segments():
            self.obstacle_segments.append((seg, key))
        self._grid_dirty = True

    # -- corridor search ----------------------------------------------------------

    def _corridor(self, u: int, v: int) -> list:
        """Triangle id path from a triangle at u to one at v, crossing only
        unconstrained edges.  Deterministic BFS."""
        tri = self.tri
        starts = sorted(tri._triangles_around(u))
        targets = set(tri._triangles_around(v))
        parent = {t: None for t in starts}
        queue = deque(starts)
        goal = None
        while queue:
            t = queue.popleft()
            if t in targets:
                goal = t
                break
            for slot in range(3):
                n = tri.tn[t][slot]
                if n < 0 or n in parent:
                    continue
                a = tri.tv[t][(slot + 1) % 3]
                b = tri.tv[t][(slot + 2) % 3]
                if (min(a, b), max(a, b)) in tri.constrained:
                    continue
                parent[n] = t
                queue.append(n)
        if goal is None:
            raise RoutingError(f"no corridor between {u} and {v}")
        path = [goal]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def _portals(self, corridor: list) -> list:
        tri = self.tri
        portals = []
        for t, s in zip(corridor, corridor[1:]):
            shared = [x for x in tri.tv[t] if x in tri.tv[s]]
            if len(shared) != 2:
                raise RoutingError("corridor triangles do not share an edge")
            portals.append(tuple(shared))
        return portals

    # -- funnel -------------------------------------------------------------------

    def _between(self, a: int, b: int, c: int) -> bool:
        """Vertex c lies on the closed segment a-b (degenerate-safe)."""
        pts = self.tri.points
        if pts[a] == pts[b]:
            return pts[c] == pts[a]
        return point_on_segment(pts[c], Segment(pts[a], pts[b]))

    def _funnel(self, start: int, end: int, portals: list) -> list:
        """Taut path corners through the portal sleeve, tagged with the side
        of the funnel ("left"/"right") each corner came from.

        Classic funnel scan with restart-from-apex on boundary cross-over;
        all tests are exact orientation predicates.
        """
        if not portals:
            return []
        o = self.tri._orient
        K = len(portals)
        left = [0] * K
        right = [0] * K
        p, q = portals[0]
        if o(start, p, q) >= 0:  # q left of (or on) start->p
            right[0], left[0] = p, q
        else:
            right[0], left[0] = q, p
        for i in range(1, K):
            p, q = portals[i]
            if p == left[i - 1]:
                left[i], right[i] = p, q
            elif q == left[i - 1]:
                left[i], right[i] = q, p
            elif p == right[i - 1]:
                right[i], left[i] = p, q
            elif q == right[i - 1]:
                right[i], left[i] = q, p
            else:
                raise RoutingError("portal sequence is not a sleeve")
        lefts = [start] + left + [end]
        rights = [start] + right + [end]
        corners = []
        apex = start
        apex_i = 0
        L = R = start
        l_i = r_i = 0
        i = 1
        while i < len(lefts):
            ln, rn = lefts[i], rights[i]
            if rn != R:
                tightens = apex == R or o(apex, R, rn) >= 0
                if tightens:
                    inside = (apex == R or apex == L
                              or o(apex, L, rn) < 0
                              or self._between(apex, L, rn))
                    if inside:
                        R, r_i = rn, i
                    else:
                        corners.append((L, "left"))
                        apex, apex_i = L, l_i
                        L = R = apex
                        l_i = r_i = apex_i
                        i = apex_i + 1
                        continue
            if ln != L:
                tightens = apex == L or o(apex, L, ln) <= 0
                if tightens:
                    inside = (apex == L or apex == R
                              or o(apex, R, ln) > 0
                              or self._between(apex, R, ln))
                    if inside:
                        L, l_i = ln, i
                    else:
                        corners.append((R, "right"))
                        apex, apex_i = R, r_i
                        L = R = apex
                        l_i = r_i = apex_i
                        i = apex_i + 1
                        continue
            i += 1
        return corners

    # -- offsets and validation -----------------------------------------------------

    def _corner_fans(self, corners: list, corridor: list) -> list:
        """Per taut corner, the contiguous run of corridor triangles fanning
        around it.  Rounding a corner needs one waypoint per fan triangle:
        consecutive fan triangles share unconstrained edges, so a polyline
        hugging the fan crosses no obstacle, while a single cut point could
        shortcut across a constrained ray at the corner vertex."""
        tri = self.tri
        runs_at = {}
        cursor = 0
        out = []
        for c, side in corners:
            runs = []
            i = 0
            while i < len(corridor):
                if c in tri.tv[corridor[i]]:
                    j = i
                    while j < len(corridor) and c in tri.tv[corridor[j]]:
                        j += 1
                    runs.append((i, j))
                    i = j
                else:
                    i += 1
            chosen = None
            for (i, j) in runs:
                if j > cursor:
                    chosen = (max(i, 0), j)
                    break
            if chosen is None and runs:
                chosen = runs[-1]
            if chosen is None:
                out.append((c, side, []))
                continue
            cursor = chosen[0]
            out.append((c, side, corridor[chosen[0]:chosen[1]]))
        return out

    def _offset_corners(self, u_pt: Point, v_pt: Point, corner_fans: list,
                        shrink: int, variant: int) -> list:
        """Waypoints replacing each taut corner: the corner vertex pushed a
        dyadic-tiny step toward each of its fan triangles' centroids."""
        tri = self.tri
        pts = tri.points
        out = []
        for c, side, fan in corner_fans:
            w = pts[c]
            dirs = []
            for t in fan:
                a, b, d = (pts[x] for x in tri.tv[t])
                dirs.append(_dyadic_snap((a.x + b.x + d.x) / 3 - w.x,
                                         (a.y + b.y + d.y) / 3 - w.y))
            if variant >= 1 and len(dirs) > 2:
                dirs = [dirs[0], dirs[len(dirs) // 2], dirs[-1]]
            if not dirs:
                dirs = [(Fraction(1), Fraction(0))]
            spans = [m for m in (_linf(pts[x], w)
                                 for t in fan for x in tri.tv[t] if x != c) if m > 0]
            scale = min(spans) if spans else Fraction(1, 1024)
            target = scale / (1 << shrink)
            for dx, dy in dirs:
                if dx == 0 and dy == 0:
                    dx, dy = Fraction(1), Fraction(0)
                ox, oy = _dyadic_shrink(dx, dy, target)
                p = Point(w.x + ox, w.y + oy)
                if not out or out[-1] != p:
                    out.append(p)
        return out

    def _candidate_ok(self, u: int, v: int, poly: Polyline) -> bool:
        u_pt, v_pt = self.mapping.point(u), self.mapping.point(v)
        segs = poly.segments()
        # self-intersection
        for i in range(len(segs)):
            for j in range(i + 1, len(segs)):
                kind = crossing_kind(segs[i], segs[j])
                if j == i + 1:
                    if kind is not CrossKind.TOUCH:
                        return False
                elif kind is not CrossKind.DISJOINT:
                    return False
        grid = self._grid_now()
        for seg in segs:
            for other, (oseg, okey) in _grid_pairs_for(grid, seg):
                kind = crossing_kind(seg, oseg)
                if kind is CrossKind.DISJOINT:
                    continue
                if kind is not CrossKind.TOUCH:
                    return False
                for p, s in ((seg.a, oseg), (seg.b, oseg), (oseg.a, seg), (oseg.b, seg)):
                    if point_on_segment(p, s) and p != u_pt and p != v_pt:
                        return False
        # no vertex point or previous bend may sit on the path
        all_points = self.tri.points
        for seg in segs:
            for p in all_points:
                if p in (seg.a, seg.b):
                    continue
                if point_on_segment(p, seg):
                    return False
        return True

    # -- public API -------------------------------------------------------------------

    def route_edge(self, u: int, v: int) -> Polyline:
        """Route (u, v) through the current free space and register it."""
        key = (min(u, v), max(u, v))
        if key in self.routes:
            raise RoutingError(f"edge {key} already routed")
        u_pt, v_pt = self.mapping.point(u), self.mapping.point(v)
        corridor = self._corridor(u, v)
        portals = self._portals(corridor)
        corners = self._funnel(u, v, portals)
        corner_fans = self._corner_fans(corners, corridor)
        for shrink in range(4, 44, 4):
            for variant in range(2):
                bends = self._offset_corners(u_pt, v_pt, corner_fans, shrink, variant)
                try:
                    poly = Polyline((u_pt, *bends, v_pt))
                except Exception:
                    continue
                if self._candidate_ok(u, v, poly):
                    self._register(u, v, poly)
                    return poly
        raise RoutingError(f"could not clear corners for edge {key}")

    def bends_total(self) -> int:
        return sum(len(p.points) - 2 for p in self.routes.values())


def _grid_pairs_for(grid: _SegmentGrid, seg: Segment):
    """Candidates from the grid near one query segment."""
    from .drawing import _float_bbox

    x0, x1, y0, y1 = _float_bbox(seg)
    cell = grid.cell
    out = {}
    for cx in range(int(x0 // cell), int(x1 // cell) + 1):
        for cy in range(int(y0 // cell), int(y1 // cell) + 1):
            for idx in grid.grid.get((cx, cy), ()):
                out[idx] = grid.items[idx]
    return [(i, payload) for i, payload in sorted(out.items())]
