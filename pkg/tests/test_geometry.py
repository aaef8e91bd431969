import random
from fractions import Fraction

import pytest

from bendcode.geometry import (
    CCW,
    COLLINEAR,
    CW,
    ClosedCurve,
    CrossKind,
    GeometryError,
    Point,
    Segment,
    Side,
    classify_point,
    convex_hull,
    crossing_kind,
    even_odd_inside,
    format_rational,
    orient,
    point_on_segment,
    rational,
    rational_sqrt_floor,
    segment_intersection_point,
    squared_distance_point_segment,
    winding_number,
)

P = Point.of


def seg(ax, ay, bx, by):
    return Segment(P(ax, ay), P(bx, by))


SQUARE = ClosedCurve((P(0, 0), P(4, 0), P(4, 4), P(0, 4)))


class TestOrient:
    def test_canonical_left_turn(self):
        assert orient(P(0, 0), P(1, 0), P(0, 1)) == CCW

    def test_collinear(self):
        assert orient(P(0, 0), P(1, 1), P(2, 2)) == COLLINEAR

    def test_mirror_right_turn(self):
        assert orient(P(0, 0), P(0, 1), P(1, 0)) == CW

    def test_antisymmetric_and_translation_invariant(self):
        rng = random.Random(7)
        for _ in range(300):
            pts = [P(Fraction(rng.randint(-50, 50), rng.randint(1, 9)),
                     Fraction(rng.randint(-50, 50), rng.randint(1, 9)))
                   for _ in range(3)]
            p, q, r = pts
            assert orient(p, q, r) == -orient(p, r, q)
            dx = Fraction(rng.randint(-20, 20), 3)
            dy = Fraction(rng.randint(-20, 20), 7)
            moved = [Point(a.x + dx, a.y + dy) for a in pts]
            assert orient(*pts) == orient(*moved)


class TestCrossingKind:
    def test_crossing_diagonals(self):
        assert crossing_kind(seg(0, 0, 2, 2), seg(0, 2, 2, 0)) is CrossKind.PROPER_CROSS

    def test_shared_endpoint(self):
        assert crossing_kind(seg(0, 0, 1, 0), seg(1, 0, 2, 1)) is CrossKind.TOUCH

    def test_disjoint_collinear(self):
        assert crossing_kind(seg(0, 0, 1, 0), seg(2, 0, 3, 0)) is CrossKind.DISJOINT

    def test_overlap(self):
        assert crossing_kind(seg(0, 0, 3, 0), seg(1, 0, 5, 0)) is CrossKind.OVERLAP
        assert crossing_kind(seg(0, 0, 2, 2), seg(1, 1, 3, 3)) is CrossKind.OVERLAP

    def test_collinear_endpoint_touch(self):
        assert crossing_kind(seg(0, 0, 1, 0), seg(1, 0, 3, 0)) is CrossKind.TOUCH

    def test_t_touch_midpoint(self):
        assert crossing_kind(seg(0, 0, 4, 0), seg(2, 0, 2, 3)) is CrossKind.TOUCH

    def test_symmetry(self):
        rng = random.Random(11)
        for _ in range(300):
            coords = [rng.randint(-4, 4) for _ in range(8)]
            try:
                s1 = seg(*coords[:4])
                s2 = seg(*coords[4:])
            except GeometryError:
                continue
            assert crossing_kind(s1, s2) is crossing_kind(s2, s1)

    def test_intersection_point(self):
        p = segment_intersection_point(seg(0, 0, 2, 2), seg(0, 2, 2, 0))
        assert p == P(1, 1)
        p = segment_intersection_point(seg(0, 0, 1, 0), seg(Fraction(1, 3), -1, Fraction(1, 3), 1))
        assert p == P(Fraction(1, 3), 0)


class TestClassifyPoint:
    def test_inside(self):
        assert classify_point(P(1, 1), SQUARE) is Side.INSIDE

    def test_on(self):
        assert classify_point(P(0, 2), SQUARE) is Side.ON

    def test_outside(self):
        assert classify_point(P(9, 9), SQUARE) is Side.OUTSIDE

    def test_nonsimple_rejected(self):
        bowtie = ClosedCurve((P(0, 0), P(2, 2), P(2, 0), P(0, 2)))
        with pytest.raises(GeometryError):
            classify_point(P(1, 1), bowtie)

    def test_vertex_is_on(self):
        assert classify_point(P(4, 4), SQUARE) is Side.ON


def _random_simple_polygon(rng):
    """Star-shaped polygon around a center: simple by construction."""
    n = rng.randint(3, 9)
    cx, cy = Fraction(rng.randint(-5, 5)), Fraction(rng.randint(-5, 5))
    pts = []
    # sort random offset points by exact angle around the center
    raw = set()
    while len(raw) < n:
        dx = Fraction(rng.randint(-40, 40), rng.randint(1, 4))
        dy = Fraction(rng.randint(-40, 40), rng.randint(1, 4))
        if dx == 0 and dy == 0:
            continue
        raw.add((dx, dy))

    def angle_key(v):
        dx, dy = v
        half = 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1
        return (half, Fraction(-dx, dy) if dy != 0 else Fraction(0))

    ordered = sorted(raw, key=angle_key)
    # drop duplicate directions (keep the farthest) to stay simple
    seen_dirs = {}
    for dx, dy in ordered:
        g = (dx, dy)
        key = angle_key(g)
        prev = seen_dirs.get(key)
        if prev is None or dx * dx + dy * dy > prev[0] ** 2 + prev[1] ** 2:
            seen_dirs[key] = g
    dirs = sorted(seen_dirs.values(), key=angle_key)
    if len(dirs) < 3:
        return None
    for dx, dy in dirs:
        pts.append(Point(cx + dx, cy + dy))
    curve = ClosedCurve(tuple(pts))
    return curve if curve.is_simple() else None


def _ray_cast_oracle(p, curve, rng):
    """Independent classification oracle: count proper crossings of a long
    random exact-rational ray; resample directions on any degeneracy."""
    if point_on_loop_ref(p, curve):
        return Side.ON
    edges = curve.edges()
    span = 1 + max(max(abs(v.x), abs(v.y)) for v in curve.vertices) + max(abs(p.x), abs(p.y))
    for _ in range(200):
        dx = Fraction(rng.randint(-997, 997), rng.randint(1, 7))
        dy = Fraction(rng.randint(-997, 997), rng.randint(1, 7))
        if dx == 0 and dy == 0:
            continue
        far = Point(p.x + 4 * span * dx, p.y + 4 * span * dy)
        ray = Segment(p, far)
        degenerate = False
        hits = 0
        for e in edges:
            kind = crossing_kind(ray, e)
            if kind is CrossKind.PROPER_CROSS:
                hits += 1
            elif kind is not CrossKind.DISJOINT:
                degenerate = True
                break
        if degenerate:
            continue
        return Side.INSIDE if hits % 2 == 1 else Side.OUTSIDE
    raise AssertionError("could not find a non-degenerate ray")


def point_on_loop_ref(p, curve):
    return any(point_on_segment(p, e) for e in curve.edges())


def test_classify_agrees_with_ray_oracle():
    rng = random.Random(20240601)
    checked = 0
    while checked < 1000:
        curve = _random_simple_polygon(rng)
        if curve is None:
            continue
        p = P(rng.randint(-60, 60), rng.randint(-60, 60))
        expected = _ray_cast_oracle(p, curve, rng)
        assert classify_point(p, curve) is expected
        checked += 1


def test_winding_number_simple_cases():
    loop = list(SQUARE.vertices)
    assert winding_number(P(1, 1), loop) == 1
    assert winding_number(P(9, 9), loop) == 0
    assert winding_number(P(1, 1), list(reversed(loop))) == -1
    assert even_odd_inside(P(1, 1), loop)
    assert not even_odd_inside(P(9, 9), loop)


def test_convex_hull_basic():
    pts = [P(0, 0), P(4, 0), P(4, 4), P(0, 4), P(2, 2), P(2, 0)]
    hull = convex_hull(pts)
    assert set(hull) == {P(0, 0), P(4, 0), P(4, 4), P(0, 4)}
    # CCW orientation
    assert orient(hull[0], hull[1], hull[2]) == CCW
    assert convex_hull([P(0, 0), P(1, 1), P(2, 2)]) == [P(0, 0), P(2, 2)]
    assert convex_hull([P(3, 3)]) == [P(3, 3)]


def test_rational_parsing_and_formatting():
    assert rational("2.5") == Fraction(5, 2)
    assert rational("5/2") == Fraction(5, 2)
    assert rational("-3") == Fraction(-3)
    assert format_rational(Fraction(5, 2)) == "5/2"
    assert format_rational(Fraction(6, 2)) == "3"
    with pytest.raises(GeometryError):
        rational("abc")


def test_degenerate_constructions_rejected():
    with pytest.raises(GeometryError):
        Segment(P(1, 1), P(1, 1))
    with pytest.raises(GeometryError):
        ClosedCurve((P(0, 0), P(1, 1)))
    with pytest.raises(GeometryError):
        ClosedCurve((P(0, 0), P(0, 0), P(1, 1)))


def test_squared_distance_point_segment():
    s = seg(0, 0, 4, 0)
    assert squared_distance_point_segment(P(2, 3), s) == 9
    assert squared_distance_point_segment(P(-3, 4), s) == 25
    assert squared_distance_point_segment(P(6, 0), s) == 4


def test_rational_sqrt_floor():
    for q in (Fraction(4), Fraction(2), Fraction(1, 2), Fraction(9, 16), Fraction(1, 10 ** 12)):
        r = rational_sqrt_floor(q)
        assert r > 0
        assert r * r <= q
        assert 4 * r * r > q / 16  # not absurdly small
