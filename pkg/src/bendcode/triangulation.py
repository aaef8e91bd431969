"""Exact incremental constrained triangulation.

The engine maintains a triangulation of points strictly inside a fixed frame
triangle.  Points are inserted one at a time (with Lawson legalization on
exact incircle tests); constraint segments are enforced afterwards by cavity
retriangulation.  All predicates are exact: coordinates are kept as
(num_x, num_y, den) integer triples per point, and orientation / incircle
signs are computed with integer arithmetic only.

Degeneracies handled exactly: points falling on existing edges split the two
incident triangles; cocircular configurations are never flipped; a constraint
passing exactly through a third vertex is reported as an error (valid inputs
never produce one).
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .geometry import Point

INF = -1  # sentinel for "no neighbor" (outside the frame triangle)


class TriangulationError(ValueError):
    pass


class ConstraintThroughVertex(TriangulationError):
    """A constraint segment passes exactly through a third vertex."""

    def __init__(self, message: str, vertex: int = -1):
        super().__init__(message)
        self.vertex = vertex


class ConstraintCrossesConstraint(TriangulationError):
    """Two constraint segments properly cross; the input is not planar."""


def _coord(p: Point) -> tuple:
    xf, yf = Fraction(p.x), Fraction(p.y)
    den = xf.denominator * yf.denominator // gcd(xf.denominator, yf.denominator)
    return (xf.numerator * (den // xf.denominator),
            yf.numerator * (den // yf.denominator),
            den)


class ExactTriangulation:
    """Triangulation of points inside a frame triangle, with constraints."""

    def __init__(self, points: Sequence[Point], frame: tuple):
        self.points: list = []
        self._coords: list = []
        self._pt_index: dict = {}
        self.tv: list = []   # triangle vertices, CCW
        self.tn: list = []   # neighbor across edge opposite vertex i
        self._alive: list = []
        self._free: list = []
        self._vert_tri: list = []
        self.constrained: set = set()
        self._last_tri = 0

        fa, fb, fc = frame
        if len({fa, fb, fc}) != 3:
            raise TriangulationError("frame must be three distinct points")
        self.input_index = [self._register_point(p) for p in points]
        a = self.input_index[fa]
        b = self.input_index[fb]
        c = self.input_index[fc]
        if len({a, b, c}) != 3:
            raise TriangulationError("frame points coincide")
        if self._orient(a, b, c) < 0:
            b, c = c, b
        if self._orient(a, b, c) == 0:
            raise TriangulationError("degenerate frame triangle")
        t = self._new_triangle(a, b, c, INF, INF, INF)
        for v in (a, b, c):
            self._vert_tri[v] = t
        done = {a, b, c}
        for ri in self.input_index:
            if ri in done:
                continue
            done.add(ri)
            self._insert_registered(ri)

    # -- point bookkeeping ---------------------------------------------------

    def _register_point(self, p: Point) -> int:
        key = (p.x, p.y)
        if key in self._pt_index:
            return self._pt_index[key]
        idx = len(self.points)
        self.points.append(p)
        self._coords.append(_coord(p))
        self._pt_index[key] = idx
        self._vert_tri.append(-1)
        return idx

    def add_point(self, p: Point) -> int:
        """Insert a new point (must lie strictly inside the frame)."""
        key = (p.x, p.y)
        if key in self._pt_index:
            return self._pt_index[key]
        idx = self._register_point(p)
        self._insert_registered(idx)
        return idx

    def index_of(self, p: Point) -> int:
        return self._pt_index[(p.x, p.y)]

    # -- exact predicates ------------------------------------------------------

    def _orient(self, i: int, j: int, k: int) -> int:
        xi, yi, di = self._coords[i]
        xj, yj, dj = self._coords[j]
        xk, yk, dk = self._coords[k]
        ax = xj * di - xi * dj
        ay = yj * di - yi * dj
        bx = xk * di - xi * dk
        by = yk * di - yi * dk
        det = ax * by - ay * bx
        return (det > 0) - (det < 0)

    def _incircle(self, a: int, b: int, c: int, d: int) -> int:
        """Positive iff d strictly inside the circumcircle of CCW (a,b,c)."""
        xd, yd, dd = self._coords[d]
        rows = []
        for v in (a, b, c):
            xv, yv, dv = self._coords[v]
            ex = xv * dd - xd * dv
            ey = yv * dd - yd * dv
            s = dv * dd
            rows.append((ex * s, ey * s, ex * ex + ey * ey))
        (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = rows
        det = (a1 * (b2 * c3 - b3 * c2)
               - a2 * (b1 * c3 - b3 * c1)
               + a3 * (b1 * c2 - b2 * c1))
        return (det > 0) - (det < 0)

    def _on_segment(self, i: int, j: int, k: int) -> bool:
        """k collinear with i-j and strictly between them."""
        if self._orient(i, j, k) != 0:
            return False
        xi, yi, di = self._coords[i]
        xj, yj, dj = self._coords[j]
        xk, yk, dk = self._coords[k]
        # compare k against the bounding box of i,j exactly
        lox = min(xi * dj * dk, xj * di * dk)
        hix = max(xi * dj * dk, xj * di * dk)
        loy = min(yi * dj * dk, yj * di * dk)
        hiy = max(yi * dj * dk, yj * di * dk)
        xkk = xk * di * dj
        ykk = yk * di * dj
        if not (lox <= xkk <= hix and loy <= ykk <= hiy):
            return False
        return (xkk, ykk) != (xi * dj * dk, yi * dj * dk) and \
               (xkk, ykk) != (xj * di * dk, yj * di * dk)

    # -- triangle bookkeeping --------------------------------------------------

    def _new_triangle(self, a, b, c, na, nb, nc) -> int:
        if self._free:
            t = self._free.pop()
            self.tv[t] = [a, b, c]
            self.tn[t] = [na, nb, nc]
            self._alive[t] = True
        else:
            t = len(self.tv)
            self.tv.append([a, b, c])
            self.tn.append([na, nb, nc])
            self._alive.append(True)
        for v in (a, b, c):
            self._vert_tri[v] = t
        return t

    def _kill(self, t: int):
        self._alive[t] = False
        self._free.append(t)

    def _replace_neighbor(self, t: int, old: int, new: int):
        if t == INF:
            return
        tn = self.tn[t]
        for i in range(3):
            if tn[i] == old:
                tn[i] = new
                return
        raise TriangulationError("neighbor bookkeeping broken")

    def triangle_count(self) -> int:
        return sum(self._alive)

    def triangles(self) -> list:
        return [tuple(self.tv[t]) for t in range(len(self.tv)) if self._alive[t]]

    def triangle_ids(self) -> list:
        return [t for t in range(len(self.tv)) if self._alive[t]]

    def edges(self) -> set:
        out = set()
        for t in self.triangle_ids():
            a, b, c = self.tv[t]
            out.add((min(a, b), max(a, b)))
            out.add((min(b, c), max(b, c)))
            out.add((min(c, a), max(c, a)))
        return out

    # -- point location ----------------------------------------------------------

    def locate(self, idx: int, hint: int | None = None):
        """Locate registered point idx: returns (tri, kind, detail).

        kind is "vertex" (detail: local vertex slot), "edge" (detail: edge
        slot, the edge opposite that vertex), or "in".
        """
        t = hint if hint is not None and self._alive[hint] else self._last_tri
        if not self._alive[t]:
            t = next(iter(self.triangle_ids()))
        steps = 0
        cap = 4 * len(self.tv) + 64
        state = idx * 2654435761 % 2 ** 32  # deterministic tie-breaking
        while True:
            steps += 1
            if steps > cap:
                t = self._locate_scan(idx)
                break
            a, b, c = self.tv[t]
            o_ab = self._orient(a, b, idx)
            o_bc = self._orient(b, c, idx)
            o_ca = self._orient(c, a, idx)
            if o_ab >= 0 and o_bc >= 0 and o_ca >= 0:
                break
            outs = []
            if o_ab < 0:
                outs.append(2)  # edge (a,b) is opposite vertex c (slot 2)
            if o_bc < 0:
                outs.append(0)
            if o_ca < 0:
                outs.append(1)
            if len(outs) > 1:
                state = (state * 1103515245 + 12345) % 2 ** 31
                pick = outs[state % len(outs)]
            else:
                pick = outs[0]
            nxt = self.tn[t][pick]
            if nxt == INF:
                t = self._locate_scan(idx)
                break
            t = nxt
        self._last_tri = t
        return self._classify_in_triangle(t, idx)

    def _locate_scan(self, idx: int) -> int:
        for t in self.triangle_ids():
            a, b, c = self.tv[t]
            if (self._orient(a, b, idx) >= 0 and self._orient(b, c, idx) >= 0
                    and self._orient(c, a, idx) >= 0):
                return t
        raise TriangulationError("point outside the frame triangle")

    def _classify_in_triangle(self, t: int, idx: int):
        a, b, c = self.tv[t]
        if idx == a:
            return t, "vertex", 0
        if idx == b:
            return t, "vertex", 1
        if idx == c:
            return t, "vertex", 2
        o_ab = self._orient(a, b, idx)
        o_bc = self._orient(b, c, idx)
        o_ca = self._orient(c, a, idx)
        if o_ab == 0:
            return t, "edge", 2
        if o_bc == 0:
            return t, "edge", 0
        if o_ca == 0:
            return t, "edge", 1
        return t, "in", -1

    # -- insertion ---------------------------------------------------------------

    def _insert_registered(self, idx: int):
        t, kind, slot = self.locate(idx)
        if kind == "vertex":
            return
        if kind == "in":
            self._split_interior(t, idx)
        else:
            self._split_edge(t, slot, idx)

    def _split_interior(self, t: int, p: int):
        a, b, c = self.tv[t]
        na, nb, nc = self.tn[t]
        self._kill(t)
        t0 = self._new_triangle(a, b, p, -2, -2, nc)
        t1 = self._new_triangle(b, c, p, -2, -2, na)
        t2 = self._new_triangle(c, a, p, -2, -2, nb)
        self.tn[t0][0] = t1
        self.tn[t0][1] = t2
        self.tn[t1][0] = t2
        self.tn[t1][1] = t0
        self.tn[t2][0] = t0
        self.tn[t2][1] = t1
        self._replace_neighbor(nc, t, t0)
        self._replace_neighbor(na, t, t1)
        self._replace_neighbor(nb, t, t2)
        self._legalize(t0, 2, p)
        self._legalize(t1, 2, p)
        self._legalize(t2, 2, p)

    def _split_edge(self, t: int, slot: int, p: int):
        """p lies in the interior of the edge opposite tv[t][slot]."""
        a = self.tv[t][slot]
        u = self.tv[t][(slot + 1) % 3]
        w = self.tv[t][(slot + 2) % 3]
        s = self.tn[t][slot]
        if s == INF:
            raise TriangulationError("point on frame edge")
        key = (min(u, w), max(u, w))
        was_constrained = key in self.constrained
        if was_constrained:
            self.constrained.discard(key)
            self.constrained.add((min(u, p), max(u, p)))
            self.constrained.add((min(p, w), max(p, w)))
        sslot = self.tv[s].index(
            next(v for v in self.tv[s] if v not in (u, w)))
        q = self.tv[s][sslot]
        n_t_u = self.tn[t][(slot + 2) % 3]  # across edge (a,u)
        n_t_w = self.tn[t][(slot + 1) % 3]  # across edge (w,a)
        n_s_u = self.tn[s][(sslot + 1) % 3] if self.tv[s][(sslot + 2) % 3] == u \
            else self.tn[s][(sslot + 2) % 3]
        n_s_w = self.tn[s][(sslot + 1) % 3] if self.tv[s][(sslot + 2) % 3] == w \
            else self.tn[s][(sslot + 2) % 3]
        self._kill(t)
        self._kill(s)
        # four new triangles around p, all CCW
        t_au = self._new_triangle(a, u, p, -2, -2, n_t_u)
        t_wa = self._new_triangle(w, a, p, -2, -2, n_t_w)
        s_uq = self._new_triangle(u, q, p, -2, -2, n_s_u)
        s_qw = self._new_triangle(q, w, p, -2, -2, n_s_w)
        self.tn[t_au][0] = s_uq
        self.tn[t_au][1] = t_wa
        self.tn[t_wa][0] = t_au
        self.tn[t_wa][1] = s_qw
        self.tn[s_uq][0] = s_qw
        self.tn[s_uq][1] = t_au
        self.tn[s_qw][0] = t_wa
        self.tn[s_qw][1] = s_uq
        self._replace_neighbor(n_t_u, t, t_au)
        self._replace_neighbor(n_t_w, t, t_wa)
        self._replace_neighbor(n_s_u, s, s_uq)
        self._replace_neighbor(n_s_w, s, s_qw)
        for tri in (t_au, t_wa, s_uq, s_qw):
            self._legalize(tri, 2, p)

    def _legalize(self, t: int, slot: int, p: int):
        """Lawson flip propagation: p = tv[t][slot], checks edge opposite p."""
        stack = [(t, slot)]
        while stack:
            t, slot = stack.pop()
            if not self._alive[t] or self.tv[t][slot] != p:
                continue
            s = self.tn[t][slot]
            if s == INF:
                continue
            u = self.tv[t][(slot + 1) % 3]
            w = self.tv[t][(slot + 2) % 3]
            if (min(u, w), max(u, w)) in self.constrained:
                continue
            q = next(v for v in self.tv[s] if v not in (u, w))
            if self._incircle(self.tv[t][0], self.tv[t][1], self.tv[t][2], q) <= 0:
                continue
            t_new, s_new = self._flip(t, slot, s, q)
            stack.append((t_new, self.tv[t_new].index(p)))
            stack.append((s_new, self.tv[s_new].index(p)))

    def _flip(self, t: int, slot: int, s: int, q: int):
        """Flip shared edge; returns the two replacement triangles."""
        p = self.tv[t][slot]
        u = self.tv[t][(slot + 1) % 3]
        w = self.tv[t][(slot + 2) % 3]
        n_t_u = self.tn[t][(slot + 2) % 3]  # across (p,u)
        n_t_w = self.tn[t][(slot + 1) % 3]  # across (w,p)
        sslot = self.tv[s].index(q)
        # in s, edge opposite q is (w,u) directed; neighbors across (q,*)
        n_s_u = self.tn[s][(sslot + 1) % 3] if self.tv[s][(sslot + 2) % 3] == u \
            else self.tn[s][(sslot + 2) % 3]
        n_s_w = self.tn[s][(sslot + 1) % 3] if self.tv[s][(sslot + 2) % 3] == w \
            else self.tn[s][(sslot + 2) % 3]
        self._kill(t)
        self._kill(s)
        t_new = self._new_triangle(p, u, q, -2, -2, n_t_u)
        s_new = self._new_triangle(p, q, w, -2, n_t_w, -2)
        self.tn[t_new][0] = n_s_u
        self.tn[t_new][1] = s_new
        self.tn[s_new][0] = n_s_w
        self.tn[s_new][2] = t_new
        self._replace_neighbor(n_t_u, t, t_new)
        self._replace_neighbor(n_s_u, s, t_new)
        self._replace_neighbor(n_t_w, t, s_new)
        self._replace_neighbor(n_s_w, s, s_new)
        return t_new, s_new

    # -- edge / adjacency queries ---------------------------------------------

    def _triangles_around(self, v: int):
        start = self._vert_tri[v]
        if start == -1 or not self._alive[start]:
            start = None
            for t in self.triangle_ids():
                if v in self.tv[t]:
                    start = t
                    break
            if start is None:
                raise TriangulationError(f"vertex {v} not in triangulation")
            self._vert_tri[v] = start
        out = [start]
        slot = self.tv[start].index(v)
        t = self.tn[start][(slot + 1) % 3]  # rotate across edge (v, next)
        while t != INF and t != start:
            out.append(t)
            slot = self.tv[t].index(v)
            t = self.tn[t][(slot + 1) % 3]
        if t == INF:
            # hit the frame: rotate the other way from start
            slot = self.tv[start].index(v)
            t = self.tn[start][(slot + 2) % 3]
            while t != INF:
                out.append(t)
                slot = self.tv[t].index(v)
                t = self.tn[t][(slot + 2) % 3]
        return out

    def edge_exists(self, u: int, w: int) -> bool:
        return any(w in self.tv[t] for t in self._triangles_around(u))

    def edge_triangles(self, u: int, w: int) -> list:
        out = []
        for t in self._triangles_around(u):
            if w in self.tv[t]:
                out.append(t)
        return out

    # -- constraints ---------------------------------------------------------

    def insert_constraint(self, a: int, b: int):
        """Force segment (a, b) to be a triangulation edge and mark it."""
        if a == b:
            raise TriangulationError("degenerate constraint")
        key = (min(a, b), max(a, b))
        if self.edge_exists(a, b):
            self.constrained.add(key)
            return
        crossed, left_chain, right_chain = self._constraint_corridor(a, b)
        boundary = {}
        for t in crossed:
            for i in range(3):
                u = self.tv[t][(i + 1) % 3]
                w = self.tv[t][(i + 2) % 3]
                ekey = (min(u, w), max(u, w))
                n = self.tn[t][i]
                if n == INF or n not in crossed:
                    boundary[ekey] = n
        for t in crossed:
            self._kill(t)
        new_tris = []
        self._fill_pseudo(b, a, list(reversed(left_chain)), new_tris)
        self._fill_pseudo(a, b, right_chain, new_tris)
        # stitch neighbors: collect new edges
        half = {}
        for t in new_tris:
            for i in range(3):
                u = self.tv[t][(i + 1) % 3]
                w = self.tv[t][(i + 2) % 3]
                half[(u, w)] = (t, i)
        for (u, w), (t, i) in half.items():
            if (w, u) in half:
                self.tn[t][i] = half[(w, u)][0]
            else:
                ekey = (min(u, w), max(u, w))
                n = boundary[ekey]
                self.tn[t][i] = n
                if n != INF:
                    # outside neighbor still points at a dead triangle
                    tn = self.tn[n]
                    for j in range(3):
                        nu = self.tv[n][(j + 1) % 3]
                        nw = self.tv[n][(j + 2) % 3]
                        if (min(nu, nw), max(nu, nw)) == ekey:
                            tn[j] = t
                            break
        self.constrained.add(key)

    def _constraint_corridor(self, a: int, b: int):
        """Walk from a to b; return (crossed triangle set, left/right chains).

        "Left" is relative to the directed segment a->b.
        """
        start = None
        for t in self._triangles_around(a):
            slot = self.tv[t].index(a)
            u1 = self.tv[t][(slot + 1) % 3]  # CCW after a
            u2 = self.tv[t][(slot + 2) % 3]
            if self._on_segment(a, b, u1):
                raise ConstraintThroughVertex(
                    f"constraint {a}-{b} passes through vertex {u1}", u1)
            if self._on_segment(a, b, u2):
                raise ConstraintThroughVertex(
                    f"constraint {a}-{b} passes through vertex {u2}", u2)
            o1 = self._orient(a, b, u1)
            o2 = self._orient(a, b, u2)
            # CCW triangle (a,u1,u2): segment exits through (u1,u2) iff
            # u1 is strictly right and u2 strictly left of a->b
            if o1 < 0 < o2 and self._orient(u1, u2, a) != self._orient(u1, u2, b):
                start = (t, u1, u2)
                break
        if start is None:
            raise TriangulationError(f"no corridor from {a} toward {b}")
        t, right, left = start
        left_chain = [left]
        right_chain = [right]
        crossed = {t}
        while True:
            ekey = (min(left, right), max(left, right))
            if ekey in self.constrained:
                raise ConstraintCrossesConstraint(
                    f"constraint {a}-{b} crosses constrained edge {ekey}")
            apex = next(v for v in self.tv[t] if v not in (left, right))
            nxt = self.tn[t][self.tv[t].index(apex)]
            if nxt == INF:
                raise TriangulationError("constraint walk left the frame")
            crossed.add(nxt)
            q = next(v for v in self.tv[nxt] if v not in (left, right))
            if q == b:
                break
            if self._on_segment(a, b, q):
                raise ConstraintThroughVertex(
                    f"constraint {a}-{b} passes through vertex {q}", q)
            if self._orient(a, b, q) > 0:
                left_chain.append(q)
                left = q
            else:
                right_chain.append(q)
                right = q
            t = nxt
        return crossed, left_chain, right_chain

    def insert_constraint_chain(self, a: int, b: int) -> list:
        """Force (a, b) as a chain of constrained edges, splitting at any
        vertices lying exactly on the segment.  Returns the vertex chain."""
        try:
            self.insert_constraint(a, b)
            return [a, b]
        except ConstraintThroughVertex as exc:
            w = exc.vertex
            if w < 0 or w in (a, b):
                raise
            return (self.insert_constraint_chain(a, w)[:-1]
                    + self.insert_constraint_chain(w, b))

    def _fill_pseudo(self, u: int, w: int, chain: list, out: list):
        """Triangulate the pseudo-polygon left of u->w bounded by chain.

        Ear clipping on the CCW polygon [u, chain..., w]; exact predicates,
        tolerant of collinear chain vertices.
        """
        if not chain:
            return
        poly = [u] + list(chain) + [w]
        while len(poly) > 3:
            k = len(poly)
            clipped = False
            for i in range(k):
                p_prev = poly[(i - 1) % k]
                p_cur = poly[i]
                p_next = poly[(i + 1) % k]
                if self._orient(p_prev, p_cur, p_next) <= 0:
                    continue
                blocked = False
                for v in poly:
                    if v in (p_prev, p_cur, p_next):
                        continue
                    if (self._orient(p_prev, p_cur, v) >= 0
                            and self._orient(p_cur, p_next, v) >= 0
                            and self._orient(p_next, p_prev, v) >= 0):
                        blocked = True
                        break
                if blocked:
                    continue
                out.append(self._new_triangle(p_prev, p_cur, p_next, -2, -2, -2))
                poly.pop(i)
                clipped = True
                break
            if not clipped:
                raise TriangulationError("cavity retriangulation found no ear")
        if self._orient(poly[0], poly[1], poly[2]) <= 0:
            raise TriangulationError("degenerate cavity remainder")
        out.append(self._new_triangle(poly[0], poly[1], poly[2], -2, -2, -2))

    # -- consistency check (tests) ----------------------------------------------

    def check(self):
        ids = self.triangle_ids()
        for t in ids:
            a, b, c = self.tv[t]
            if self._orient(a, b, c) <= 0:
                raise AssertionError(f"triangle {t} not CCW")
            for i in range(3):
                n = self.tn[t][i]
                if n == INF:
                    continue
                if not self._alive[n]:
                    raise AssertionError(f"triangle {t} points at dead {n}")
                u = self.tv[t][(i + 1) % 3]
                w = self.tv[t][(i + 2) % 3]
                if u not in self.tv[n] or w not in self.tv[n]:
                    raise AssertionError(f"neighbor {t}->{n} lacks shared edge")
                if t not in self.tn[n]:
                    raise AssertionError(f"asymmetric adjacency {t}/{n}")
        # Euler check: T = 2 * interior + hull stuff; cheaper: every edge
        # appears in at most 2 triangles
        seen = {}
        for t in ids:
            a, b, c = self.tv[t]
            for u, w in ((a, b), (b, c), (c, a)):
                key = (min(u, w), max(u, w))
                seen[key] = seen.get(key, 0) + 1
                if seen[key] > 2:
                    raise AssertionError(f"edge {key} in >2 triangles")


def frame_triangle(points: Iterable[Point]) -> tuple:
    """Bounding triangle per the fixed convention: the axis-aligned bounding
    box inflated by its own width/height (at least 1), circumscribed by a
    triangle with slope +-1 sides.  Strictly contains every input point."""
    pts = list(points)
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    wi = max(x1 - x0, Fraction(1))
    hi = max(y1 - y0, Fraction(1))
    bx0, bx1 = x0 - wi, x1 + wi
    by0, by1 = y0 - hi, y1 + hi
    h = by1 - by0
    w = bx1 - bx0
    a = Point(bx0 - h, by0)
    b = Point(bx1 + h, by0)
    c = Point((bx0 + bx1) / 2, by1 + w / 2)
    return a, b, c


def triangulate_with_frame(points: Sequence[Point],
                           segments: Iterable[tuple] = ()) -> ExactTriangulation:
    """Triangulate `points` plus a computed frame triangle (appended last),
    honoring `segments` (index pairs into `points`) as constrained edges."""
    fa, fb, fc = frame_triangle(points)
    all_pts = list(points) + [fa, fb, fc]
    n = len(points)
    tri = ExactTriangulation(all_pts, frame=(n, n + 1, n + 2))
    for (i, j) in segments:
        tri.insert_constraint(i, j)
    return tri
