"""Exact planar primitives: rational points, orientation/intersection
predicates, and point-vs-closed-curve classification.

Everything is computed with arbitrary-precision rational arithmetic.  There
are no epsilon tolerances: degenerate cases (collinear triples, touching
segments, points exactly on an edge) are decided exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

RationalLike = Union[int, str, Fraction]

# orient() return values: sign of the cross product.
CCW = 1
COLLINEAR = 0
CW = -1


class CrossKind(Enum):
    PROPER_CROSS = "proper_cross"  # unique intersection interior to both
    TOUCH = "touch"                # intersection at an endpoint of at least one
    OVERLAP = "overlap"            # collinear, positive-length overlap
    DISJOINT = "disjoint"


class Side(Enum):
    INSIDE = "inside"
    ON = "on"
    OUTSIDE = "outside"


class GeometryError(ValueError):
    """Invalid geometric construction or predicate precondition."""


def rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions, or literal strings ("2.5" or "5/2") to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise GeometryError(f"bad rational literal: {value!r}") from exc
    raise GeometryError(f"cannot interpret {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    """Emit a rational as an exact fraction string ("5/2", "-3")."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Point:
    x: Fraction
    y: Fraction

    @staticmethod
    def of(x: RationalLike, y: RationalLike) -> "Point":
        return Point(rational(x), rational(y))

    def key(self) -> tuple:
        """Lexicographic sort key (x, then y)."""
        return (self.x, self.y)

    def __repr__(self) -> str:  # compact in test failures
        return f"P({format_rational(self.x)},{format_rational(self.y)})"


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise GeometryError(f"degenerate segment at {self.a}")

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)


@dataclass(frozen=True)
class ClosedCurve:
    """Cyclic polygon given by >= 3 vertices with consecutive points distinct."""

    vertices: tuple

    def __post_init__(self):
        pts = tuple(self.vertices)
        object.__setattr__(self, "vertices", pts)
        if len(pts) < 3:
            raise GeometryError("closed curve needs at least 3 vertices")
        for i, p in enumerate(pts):
            if p == pts[(i + 1) % len(pts)]:
                raise GeometryError(f"repeated consecutive point {p}")
        object.__setattr__(self, "_simple", None)

    def edges(self):
        pts = self.vertices
        return [Segment(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]

    def is_simple(self) -> bool:
        """True iff non-adjacent edges are disjoint and adjacent edges meet
        only at their shared vertex.  Cached after first evaluation."""
        cached = self._simple
        if cached is not None:
            return cached
        edges = self.edges()
        k = len(edges)
        simple = True
        for i in range(k):
            for j in range(i + 1, k):
                kind = crossing_kind(edges[i], edges[j])
                adjacent = j == i + 1 or (i == 0 and j == k - 1)
                if adjacent:
                    # must share exactly the one endpoint
                    if kind in (CrossKind.PROPER_CROSS, CrossKind.OVERLAP):
                        simple = False
                    elif kind is CrossKind.TOUCH:
                        shared = _shared_touch_is_single_vertex(edges[i], edges[j])
                        if not shared:
                            simple = False
                else:
                    if kind is not CrossKind.DISJOINT:
                        simple = False
                if not simple:
                    break
            if not simple:
                break
        object.__setattr__(self, "_simple", simple)
        return simple


def _shared_touch_is_single_vertex(s1: Segment, s2: Segment) -> bool:
    shared = {s1.a, s1.b} & {s2.a, s2.b}
    if len(shared) != 1:
        return False
    p = next(iter(shared))
    # the other endpoints must not lie on the opposite segment
    for q, s in ((s1.a, s2), (s1.b, s2), (s2.a, s1), (s2.b, s1)):
        if q != p and point_on_segment(q, s):
            return False
    return True


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the exact cross product (q-p) x (r-p).

    Returns CCW (+1) for a left turn, CW (-1) for a right turn, COLLINEAR (0).
    """
    det = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    if det > 0:
        return CCW
    if det < 0:
        return CW
    return COLLINEAR


def point_on_segment(p: Point, s: Segment) -> bool:
    """True iff p lies on the closed segment s (endpoints included)."""
    if orient(s.a, s.b, p) != COLLINEAR:
        return False
    return (min(s.a.x, s.b.x) <= p.x <= max(s.a.x, s.b.x)
            and min(s.a.y, s.b.y) <= p.y <= max(s.a.y, s.b.y))


def crossing_kind(s1: Segment, s2: Segment) -> CrossKind:
    """Classify how two segments meet.  Symmetric in its arguments.

    PROPER_CROSS iff the unique intersection point is interior to both.
    """
    o1 = orient(s1.a, s1.b, s2.a)
    o2 = orient(s1.a, s1.b, s2.b)
    o3 = orient(s2.a, s2.b, s1.a)
    o4 = orient(s2.a, s2.b, s1.b)

    if o1 == 0 and o2 == 0:
        # collinear: compare 1-d intervals along the common line
        if s1.a.x != s1.b.x:
            key = lambda p: p.x
        else:
            key = lambda p: p.y
        lo1, hi1 = sorted((key(s1.a), key(s1.b)))
        lo2, hi2 = sorted((key(s2.a), key(s2.b)))
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi:
            return CrossKind.DISJOINT
        if lo < hi:
            return CrossKind.OVERLAP
        return CrossKind.TOUCH

    if o1 * o2 < 0 and o3 * o4 < 0:
        return CrossKind.PROPER_CROSS

    # touching: some endpoint lies on the other closed segment
    for p, s in ((s2.a, s1), (s2.b, s1), (s1.a, s2), (s1.b, s2)):
        if point_on_segment(p, s):
            return CrossKind.TOUCH
    return CrossKind.DISJOINT


def segment_intersection_point(s1: Segment, s2: Segment) -> Point:
    """Exact intersection point of two properly crossing segments."""
    if crossing_kind(s1, s2) is not CrossKind.PROPER_CROSS:
        raise GeometryError("segments do not properly cross")
    d1x = s1.b.x - s1.a.x
    d1y = s1.b.y - s1.a.y
    d2x = s2.b.x - s2.a.x
    d2y = s2.b.y - s2.a.y
    denom = d1x * d2y - d1y * d2x
    t = ((s2.a.x - s1.a.x) * d2y - (s2.a.y - s1.a.y) * d2x) / denom
    return Point(s1.a.x + t * d1x, s1.a.y + t * d1y)


def even_odd_inside(p: Point, loop: Sequence[Point]) -> bool:
    """Even-odd (ray-crossing parity) test against an arbitrary closed
    polyline loop.  The loop need not be simple; p must not lie on it."""
    crossings = 0
    k = len(loop)
    for i in range(k):
        a = loop[i]
        b = loop[(i + 1) % k]
        if a == b:
            continue
        if (a.y <= p.y) != (b.y <= p.y):
            side = orient(a, b, p)
            if b.y > a.y:  # upward edge: count iff p strictly left
                if side > 0:
                    crossings += 1
            else:          # downward edge: count iff p strictly right
                if side < 0:
                    crossings += 1
    return crossings % 2 == 1


def winding_number(p: Point, loop: Sequence[Point]) -> int:
    """Exact signed winding number of a closed polyline loop around p."""
    wn = 0
    k = len(loop)
    for i in range(k):
        a = loop[i]
        b = loop[(i + 1) % k]
        if a == b:
            continue
        if a.y <= p.y:
            if b.y > p.y and orient(a, b, p) > 0:
                wn += 1
        else:
            if b.y <= p.y and orient(a, b, p) < 0:
                wn -= 1
    return wn


def point_on_loop(p: Point, loop: Sequence[Point]) -> bool:
    k = len(loop)
    for i in range(k):
        a = loop[i]
        b = loop[(i + 1) % k]
        if a == b:
            continue
        if point_on_segment(p, Segment(a, b)):
            return True
    return False


def classify_point(p: Point, c: ClosedCurve) -> Side:
    """Classify p against a simple closed curve: INSIDE, ON, or OUTSIDE.

    Rejects non-simple curves.
    """
    if not c.is_simple():
        raise GeometryError("classify_point requires a simple curve")
    if point_on_loop(p, c.vertices):
        return Side.ON
    return Side.INSIDE if even_odd_inside(p, c.vertices) else Side.OUTSIDE


def convex_hull(points: Iterable[Point]) -> list:
    """Hull extreme points in CCW order (collinear boundary points dropped).

    Returns a single point or a 2-point list for degenerate inputs.
    """
    pts = sorted(set(points), key=Point.key)
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:  # all points collinear
        return [pts[0], pts[-1]]
    return hull


def squared_distance(p: Point, q: Point) -> Fraction:
    return (p.x - q.x) ** 2 + (p.y - q.y) ** 2


def squared_distance_point_segment(p: Point, s: Segment) -> Fraction:
    dx = s.b.x - s.a.x
    dy = s.b.y - s.a.y
    t_num = (p.x - s.a.x) * dx + (p.y - s.a.y) * dy
    t_den = dx * dx + dy * dy
    if t_num <= 0:
        return squared_distance(p, s.a)
    if t_num >= t_den:
        return squared_distance(p, s.b)
    t = Fraction(t_num, t_den)
    foot = Point(s.a.x + t * dx, s.a.y + t * dy)
    return squared_distance(p, foot)


def rational_sqrt_floor(q: Fraction) -> Fraction:
    """A positive rational r with r <= sqrt(q), within a constant factor.

    Used to derive exact clearance radii from squared distances; any
    under-approximation of sqrt(q) is acceptable for that purpose.
    """
    if q <= 0:
        raise GeometryError("needs a positive value")
    # scale by an even power of two so the integer floor sqrt is accurate
    shift = 32
    scaled = q * (1 << (2 * shift))
    lo = Fraction(math.isqrt(scaled.numerator), math.isqrt(scaled.denominator) + 1)
    return lo / (1 << shift)
