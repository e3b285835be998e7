import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planar_width.dynamic_hull import EMPTY_DIFF, DynamicHull, HullDiff, normal_cone
from planar_width.errors import DuplicateIdError, EmptyHullError, StaleSideError, UnknownIdError
from planar_width.geom_core import Corner, Point, Side, SquaredDistance, hull_corners, hull_sides, is_compatible
from planar_width.oracle import NaiveHull, scratch_hull


def build(points, alpha=0.25):
    hull = DynamicHull(alpha)
    for i, (x, y) in enumerate(points):
        hull.insert_point(Point(i, x, y))
    return hull


def test_interior_insert_is_empty_diff():
    hull = build([(0, 0), (8, 0), (0, 8)])
    diff = hull.insert_point(Point(9, 1, 1))
    assert diff == EMPTY_DIFF
    assert diff.k == 0


def test_insert_outside_square_edge(square):
    hull = build(square)
    diff = hull.insert_point(Point(9, 3, 1))
    assert diff.sides_removed == {Side((2, 0), (2, 2))}
    assert diff.sides_added == {Side((2, 0), (3, 1)), Side((3, 1), (2, 2))}
    assert {c.apex for c in diff.corners_removed} == {(2, 0), (2, 2)}
    assert {c.apex for c in diff.corners_added} == {(2, 0), (3, 1), (2, 2)}
    assert diff.k == 8
    assert hull.vertices() == [(0, 0), (2, 0), (3, 1), (2, 2), (0, 2)]


def test_delete_reverses_insert(square):
    hull = build(square)
    inserted = hull.insert_point(Point(9, 3, 1))
    deleted = hull.delete_point(9)
    assert deleted == inserted.inverse()
    assert hull.vertices() == square


def test_delete_interior_point_is_empty():
    pentagon = [(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)]
    hull = build(pentagon + [(2, 2)])
    assert hull.delete_point(len(pentagon)) == EMPTY_DIFF


def test_duplicate_coordinates_are_a_multiset(square):
    hull = build(square)
    assert hull.insert_point(Point(10, 2, 2)) == EMPTY_DIFF
    assert hull.delete_point(2) == EMPTY_DIFF
    assert hull.vertices() == square
    diff = hull.delete_point(10)
    assert {c.apex for c in diff.corners_removed} == {(2, 0), (2, 2), (0, 2)}


def test_errors(square):
    hull = build(square)
    with pytest.raises(DuplicateIdError):
        hull.insert_point(Point(0, 5, 5))
    with pytest.raises(UnknownIdError):
        hull.delete_point(99)
    with pytest.raises(StaleSideError):
        hull.compatible_corners(Side((0, 0), (2, 2)))
    with pytest.raises(EmptyHullError):
        DynamicHull().extreme_vertices((1, 0))
    with pytest.raises(ValueError):
        hull.extreme_vertices((0, 0))


def test_extreme_vertices_on_square(square):
    hull = build(square)
    assert hull.extreme_vertices((1, 0)) == ((2, 0), (2, 2))
    assert hull.extreme_vertices((1, 1)) == ((2, 2),)
    assert hull.extreme_vertices((-1, 0)) == ((0, 2), (0, 0))


def test_compatible_corners_examples(square, triangle, bottom_side, corner_at):
    assert set(build(square).compatible_corners(bottom_side)) == {
        corner_at(square, (0, 2)),
        corner_at(square, (2, 2)),
    }
    assert build(triangle).compatible_corners(Side((0, 0), (4, 0))) == (corner_at(triangle, (0, 3)),)


def test_nearest_corner(triangle, hypotenuse, corner_at):
    corner, dist = build(triangle).nearest_corner(hypotenuse)
    assert corner == corner_at(triangle, (0, 0))
    assert dist == SquaredDistance(144, 25)


def test_normal_cone_of_square_corner(square, corner_at):
    assert normal_cone(corner_at(square, (0, 2))) == ((0, 1), (-1, 0))


def test_degenerate_transitions():
    hull = DynamicHull()
    assert hull.insert_point(Point(0, 0, 0)) == EMPTY_DIFF
    assert hull.insert_point(Point(1, 4, 4)) == EMPTY_DIFF
    assert hull.insert_point(Point(2, 2, 2)) == EMPTY_DIFF
    assert hull.is_degenerate
    diff = hull.insert_point(Point(3, 4, 0))
    assert len(diff.corners_added) == 3 and len(diff.sides_added) == 3
    back = hull.delete_point(3)
    assert back == diff.inverse()
    assert hull.vertices() == [(0, 0), (4, 4)]


def _apply_features(corners, sides, diff: HullDiff):
    assert diff.corners_removed <= corners and diff.sides_removed <= sides
    corners = (corners - diff.corners_removed) | diff.corners_added
    sides = (sides - diff.sides_removed) | diff.sides_added
    return corners, sides


small = st.integers(-12, 12)
ops_strategy = st.lists(st.tuples(st.booleans(), small, small, st.integers(0, 10 ** 6)), min_size=1, max_size=80)


@pytest.mark.property_based
@given(ops_strategy, st.sampled_from([0.25, 0.3]))
@settings(max_examples=150, deadline=None)
def test_random_updates_match_naive_hull(ops, alpha):
    dynamic, naive = DynamicHull(alpha), NaiveHull()
    corners, sides = set(), set()
    live = []
    next_id = 0
    for is_insert, x, y, pick in ops:
        if is_insert or not live:
            p = Point(next_id, x, y)
            next_id += 1
            live.append(p.id)
            diff = dynamic.insert_point(p)
            expected = naive.insert_point(p)
        else:
            pid = live.pop(pick % len(live))
            diff = dynamic.delete_point(pid)
            expected = naive.delete_point(pid)
        assert diff == expected
        corners, sides = _apply_features(corners, sides, diff)
        assert dynamic.vertices() == naive.vertices()
        assert corners == set(dynamic.corners()) and sides == set(dynamic.sides())
        assert dynamic.audit() is None


def test_hull_vertex_deletions_on_random_set():
    rng = random.Random(7)
    pts = list(dict.fromkeys((rng.randint(-1000, 1000), rng.randint(-1000, 1000)) for _ in range(200)))
    hull, naive = build(pts), NaiveHull()
    for i, (x, y) in enumerate(pts):
        naive.insert_point(Point(i, x, y))
    ids = {p: i for i, p in enumerate(pts)}
    while len(hull) > 3:
        apex = hull.vertices()[0]
        pid = ids[apex]
        assert hull.delete_point(pid) == naive.delete_point(pid)
        del ids[apex]
        assert hull.vertices() == scratch_hull(ids)


def test_extreme_vertices_match_scan():
    rng = random.Random(3)
    pts = [(rng.randint(-500, 500), rng.randint(-500, 500)) for _ in range(300)]
    hull = build(pts)
    naive = NaiveHull()
    for i, (x, y) in enumerate(pts):
        naive.insert_point(Point(i, x, y))
    directions = [(rng.randint(-9, 9), rng.randint(-9, 9)) for _ in range(100)] + [(0, 1), (1, 0), (0, -1), (-1, 0)]
    for d in directions:
        if d == (0, 0):
            continue
        assert set(hull.extreme_vertices(d)) == set(naive.extreme_vertices(d))


def test_compatible_corners_match_scan():
    rng = random.Random(11)
    pts = [(rng.randint(-300, 300), rng.randint(-300, 300)) for _ in range(150)]
    hull = build(pts)
    vertices = hull.vertices()
    corners = hull_corners(vertices)
    for s in hull_sides(vertices):
        expected = {c for c in corners if is_compatible(s, c)}
        assert set(hull.compatible_corners(s)) == expected
        assert 1 <= len(expected) <= 2


def test_sorted_insertions_trigger_rebuilds():
    hull = DynamicHull(0.25)
    for i in range(256):
        hull.insert_point(Point(i, i, (i * i) % 97))
    assert hull.rebuilds > 0
    assert hull.audit() is None
    assert hull.vertices() == scratch_hull((i, (i * i) % 97) for i in range(256))


def test_interior_updates_stop_refreshing_bridges_early(circle_polygon, disk_points):
    rng = random.Random(47)
    poly = circle_polygon(1024, radius=10 ** 6)
    hull = build(poly)
    interior = disk_points(rng, 200, radius=10 ** 6)
    costs = []
    for i, (x, y) in enumerate(interior, start=len(poly)):
        before, rebuilds = hull.bridge_updates, hull.rebuilds
        assert hull.insert_point(Point(i, x, y)).is_empty
        if hull.rebuilds == rebuilds:
            costs.append(hull.bridge_updates - before)
    assert hull.audit() is None
    for i in range(len(poly), len(poly) + len(interior)):
        before, rebuilds = hull.bridge_updates, hull.rebuilds
        assert hull.delete_point(i).is_empty
        if hull.rebuilds == rebuilds:
            costs.append(hull.bridge_updates - before)
    assert hull.audit() is None
    assert hull.vertices() == poly
    assert len(costs) > 300
    assert sum(costs) / len(costs) <= 8


def test_hull_vertex_updates_refresh_to_the_root(circle_polygon):
    poly = circle_polygon(1024, radius=10 ** 6)
    hull = build(poly)
    before = hull.bridge_updates
    hull.insert_point(Point(5000, 2 * 10 ** 6, 0))
    assert hull.bridge_updates - before >= 10
    assert hull.audit() is None


def test_corner_identity(square):
    hull = build(square)
    assert hull.corner_at((0, 0)) == Corner((0, 2), (0, 0), (2, 0))
