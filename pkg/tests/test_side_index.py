import math
import random
from functools import cmp_to_key

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planar_width.errors import DuplicateSideError, UnknownSideError
from planar_width.geom_core import Corner, Side, SquaredDistance, hull_corners, hull_sides, is_compatible
from planar_width.oracle import nearest_side_scan, scratch_hull
from planar_width.side_index import SideIndex, arc_ranges, direction_cmp, in_arc, side_cmp


def index_of(sides, **kwargs):
    index = SideIndex(**kwargs)
    for s in sides:
        index.insert_side(s)
    return index


def test_square_sides_in_normal_order(square):
    sides = hull_sides(square)
    shuffled = [sides[2], sides[0], sides[3], sides[1]]
    index = index_of(shuffled)
    normals = [s.outward_normal() for s in index.sides()]
    assert normals == [(0, -2), (2, 0), (0, 2), (-2, 0)]
    assert index.audit() is None


def test_direction_order():
    assert direction_cmp((0, -1), (1, 0)) < 0
    assert direction_cmp((1, 0), (0, 1)) < 0
    assert direction_cmp((0, 1), (-1, 0)) < 0
    assert direction_cmp((-1, -1), (0, -1)) < 0
    assert direction_cmp((2, 0), (5, 0)) == 0


def test_nearest_on_square_ties_by_side_key(square, corner_at, bottom_side):
    index = index_of(hull_sides(square))
    side, dist = index.nearest_compatible_side(corner_at(square, (0, 2)))
    assert side == bottom_side
    assert dist == SquaredDistance(4, 1)


def test_nearest_on_triangle(triangle, corner_at, hypotenuse):
    index = index_of(hull_sides(triangle))
    side, dist = index.nearest_compatible_side(corner_at(triangle, (0, 0)))
    assert side == hypotenuse
    assert dist == SquaredDistance(144, 25)


def test_triangle_arc_holds_only_left_normal(triangle, corner_at):
    ranges = arc_ranges(corner_at(triangle, (4, 0)))
    inside = [s for s in hull_sides(triangle) if in_arc(s.outward_normal(), ranges)]
    assert inside == [Side((0, 3), (0, 0))]


def test_empty_index_returns_none(square, corner_at):
    assert SideIndex().nearest_compatible_side(corner_at(square, (0, 0))) is None


def test_errors(square):
    index = index_of(hull_sides(square))
    with pytest.raises(DuplicateSideError):
        index.insert_side(Side((0, 0), (2, 0)))
    with pytest.raises(UnknownSideError):
        index.delete_side(Side((0, 0), (2, 2)))


def test_no_compatible_side_gives_none():
    # Remaining sides do not cover the antipodal arc of the corner.
    corner = Corner((0, 10), (0, 0), (10, 0))
    index = index_of([Side((0, 0), (10, 0)), Side((0, 10), (0, 0))])
    assert index.nearest_compatible_side(corner) is None
    assert nearest_side_scan(corner, index.sides()) is None


def test_arc_equals_compatible_set(random_polygon):
    rng = random.Random(23)
    for _ in range(40):
        poly = random_polygon(rng, rng.randint(3, 300))
        if len(poly) < 3:
            continue
        sides = hull_sides(poly)
        for c in hull_corners(poly):
            ranges = arc_ranges(c)
            assert {s for s in sides if in_arc(s.outward_normal(), ranges)} == {
                s for s in sides if is_compatible(s, c)
            }


def test_canonical_cover_is_exactly_the_arc(random_polygon):
    rng = random.Random(29)
    poly = random_polygon(rng, 3000)
    sides = hull_sides(poly)
    index = index_of(rng.sample(sides, len(sides)), small_block=4)
    for c in hull_corners(poly):
        covered, singles = index.canonical_cover(c)
        got = covered + singles
        assert len(got) == len(set(got))
        assert set(got) == {s for s in sides if is_compatible(s, c)}


def test_queries_match_scan_on_random_polygons(random_polygon):
    rng = random.Random(31)
    for _ in range(30):
        poly = random_polygon(rng, rng.randint(3, 512))
        if len(poly) < 3:
            continue
        sides = hull_sides(poly)
        index = index_of(rng.sample(sides, len(sides)), small_block=4)
        for c in hull_corners(poly):
            assert index.nearest_compatible_side(c) == nearest_side_scan(c, sides)


def test_partial_side_sets_match_scan(random_polygon):
    rng = random.Random(37)
    poly = random_polygon(rng, 4000)
    sides = hull_sides(poly)
    index = index_of(sides, small_block=4)
    kept = list(sides)
    found_none = False
    for s in rng.sample(sides, len(sides) - 2):
        index.delete_side(s)
        kept.remove(s)
        assert index.audit() is None
        for c in hull_corners(poly)[::3]:
            got = index.nearest_compatible_side(c)
            assert got == nearest_side_scan(c, kept)
            found_none = found_none or got is None
    assert found_none


def sorted_insertion_work(circle_polygon, n):
    sides = sorted(hull_sides(circle_polygon(n)), key=cmp_to_key(side_cmp))
    index = index_of(sides, alpha=0.25)
    assert index.audit() is None
    return index, sides


@pytest.mark.parametrize("n", [2 ** 10, 2 ** 12])
def test_sorted_insertions_rebuild_within_n_log_n(circle_polygon, n):
    index, sides = sorted_insertion_work(circle_polygon, n)
    m = len(sides)
    assert index.rebuild_count > 0
    assert index.rebuild_count <= m
    assert index.rebuilt_sides <= 4 * m * math.log2(m)
    for s in sides:
        index.delete_side(s)
    assert len(index) == 0 and index.audit() is None


def test_rebuild_work_per_side_grows_logarithmically(circle_polygon):
    small, _ = sorted_insertion_work(circle_polygon, 2 ** 9)
    large, _ = sorted_insertion_work(circle_polygon, 2 ** 13)
    per_side_small = small.rebuilt_sides / 2 ** 9
    per_side_large = large.rebuilt_sides / 2 ** 13
    # 16x more sides may cost at most a few extra levels of rebuilding per side
    assert per_side_large <= per_side_small + 4 * math.log2(16)



@pytest.mark.property_based
@given(st.lists(st.tuples(st.integers(-40, 40), st.integers(-40, 40)), min_size=3, max_size=60), st.randoms())
@settings(max_examples=100, deadline=None)
def test_insert_delete_keeps_audit_clean(pts, rnd):
    poly = scratch_hull(pts)
    if len(poly) < 3:
        return
    sides = hull_sides(poly)
    index = SideIndex(small_block=2)
    for s in rnd.sample(sides, len(sides)):
        index.insert_side(s)
        assert index.audit() is None
    for s in rnd.sample(sides, len(sides)):
        index.delete_side(s)
        assert index.audit() is None


@pytest.mark.slow
def test_many_sides_in_random_order(circle_polygon):
    rng = random.Random(43)
    poly = circle_polygon(10 ** 4)
    sides = hull_sides(poly)
    index = index_of(rng.sample(sides, len(sides)))
    assert index.audit() is None
    corners = hull_corners(poly)
    for c in rng.sample(corners, 200):
        assert index.nearest_compatible_side(c) == nearest_side_scan(c, sides)
