"""
Brute-force reference paths for differential testing: a scratch monotone-chain
hull, the rotating-calipers width, the all-pairs width and a linear nearest-side
scan. Nothing here touches the dynamic structures; only geom_core is shared.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set, Tuple

from planar_width.dynamic_hull import HullDiff
from planar_width.errors import DegenerateHullError, DuplicateIdError, EmptyHullError, StaleSideError, UnknownIdError
from planar_width.geom_core import (
    ZERO,
    Corner,
    Point,
    Side,
    SquaredDistance,
    Vertex,
    cross,
    hull_corners,
    hull_sides,
    is_compatible,
    squared_distance,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StaticWidthResult:
    width_sq: SquaredDistance
    witness: Optional[Tuple[Side, Corner]] = None


def scratch_hull(points: Iterable[Vertex]) -> List[Vertex]:
    """Strict CCW hull starting at the lexicographically smallest point."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: List[Vertex] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Vertex] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def hull_features(vertices: List[Vertex]) -> Tuple[Set[Corner], Set[Side]]:
    return set(hull_corners(vertices)), set(hull_sides(vertices))


def compatible_pairs(vertices: List[Vertex]) -> Set[Tuple[Side, Corner]]:
    corners, sides = hull_features(vertices)
    return {(s, c) for s in sides for c in corners if is_compatible(s, c)}


def pair_turnover(before: List[Vertex], after: List[Vertex]) -> int:
    """Size of the symmetric difference of the two hulls' compatible pairs."""
    return len(compatible_pairs(before) ^ compatible_pairs(after))


def _pick(best: Optional[Tuple], candidate: Tuple) -> Tuple:
    # (dist, corner, side) lexicographic
    return candidate if best is None or candidate < best else best


def calipers_width(points: Iterable[Vertex]) -> StaticWidthResult:
    hull = scratch_hull(points)
    n = len(hull)
    if n < 3:
        return StaticWidthResult(ZERO)
    corners = {c.apex: c for c in hull_corners(hull)}
    best = None
    j = 1
    for i in range(n):
        p, q = hull[i], hull[(i + 1) % n]
        side = Side(p, q)
        steps = 0
        while steps < n and cross(p, q, hull[(j + 1) % n]) > cross(p, q, hull[j % n]):
            j += 1
            steps += 1
        far = cross(p, q, hull[j % n])
        for apex in (hull[j % n], hull[(j + 1) % n]):
            if cross(p, q, apex) != far:
                continue
            corner = corners[apex]
            best = _pick(best, (squared_distance(side, corner), corner, side))
    dist, corner, side = best
    return StaticWidthResult(dist, (side, corner))


def all_pairs_width(points: Iterable[Vertex]) -> StaticWidthResult:
    hull = scratch_hull(points)
    if len(hull) < 3:
        raise DegenerateHullError("width by pairs needs a hull with at least three vertices")
    best = None
    for side in hull_sides(hull):
        for corner in hull_corners(hull):
            dist = squared_distance(side, corner)
            if not dist.is_infinite:
                best = _pick(best, (dist, corner, side))
    dist, corner, side = best
    return StaticWidthResult(dist, (side, corner))


def nearest_side_scan(c: Corner, sides: Iterable[Side]) -> Optional[Tuple[Side, SquaredDistance]]:
    best = None
    for s in sides:
        if not is_compatible(s, c):
            continue
        dist = squared_distance(s, c)
        if best is None or (dist, s.key) < (best[1], best[0].key):
            best = (s, dist)
    return best


class NaiveHull:
    """Recompute-from-scratch hull with the DynamicHull interface."""

    def __init__(self):
        self._points: Dict[int, Point] = {}
        self._vertices: List[Vertex] = []

    def __len__(self) -> int:
        return len(self._points)

    def _refresh(self) -> HullDiff:
        old = self._vertices
        self._vertices = scratch_hull(p.coords for p in self._points.values())
        old_corners, old_sides = hull_features(old)
        new_corners, new_sides = hull_features(self._vertices)
        return HullDiff(
            corners_removed=frozenset(old_corners - new_corners),
            corners_added=frozenset(new_corners - old_corners),
            sides_removed=frozenset(old_sides - new_sides),
            sides_added=frozenset(new_sides - old_sides),
        )

    def insert_point(self, p: Point) -> HullDiff:
        if p.id in self._points:
            raise DuplicateIdError("point id %s is already live" % p.id)
        p.check_bounds()
        self._points[p.id] = p
        return self._refresh()

    def delete_point(self, point_id: int) -> HullDiff:
        if self._points.pop(point_id, None) is None:
            raise UnknownIdError("point id %s is not live" % point_id)
        return self._refresh()

    def vertices(self) -> List[Vertex]:
        return list(self._vertices)

    def extreme_vertices(self, d: Vertex) -> Tuple[Vertex, ...]:
        if d == (0, 0):
            raise ValueError("direction must be nonzero")
        if not self._vertices:
            raise EmptyHullError("hull is empty")
        best = max(d[0] * x + d[1] * y for x, y in self._vertices)
        hits = [v for v in self._vertices if d[0] * v[0] + d[1] * v[1] == best]
        n = len(self._vertices)
        if len(hits) == 2 and n >= 3:
            i = self._vertices.index(hits[0])
            if self._vertices[(i + 1) % n] != hits[1]:
                hits.reverse()
        return tuple(hits)

    def compatible_corners(self, s: Side) -> Tuple[Corner, ...]:
        if s not in set(hull_sides(self._vertices)):
            raise StaleSideError("side %s -> %s is not on the current hull" % (s.u, s.v))
        return tuple(c for c in hull_corners(self._vertices) if is_compatible(s, c))


class NaiveWidthMaintainer:
    """Baseline that recomputes the width with rotating calipers after every update."""

    def __init__(self):
        self._points: Dict[int, Vertex] = {}

    def insert(self, point_id: int, x: int, y: int) -> StaticWidthResult:
        if point_id in self._points:
            raise DuplicateIdError("point id %s is already live" % point_id)
        self._points[point_id] = (x, y)
        return self.width()

    def delete(self, point_id: int) -> StaticWidthResult:
        if self._points.pop(point_id, None) is None:
            raise UnknownIdError("point id %s is not live" % point_id)
        return self.width()

    def width(self) -> StaticWidthResult:
        return calipers_width(self._points.values())


__all__ = [
    "NaiveHull",
    "NaiveWidthMaintainer",
    "StaticWidthResult",
    "all_pairs_width",
    "calipers_width",
    "compatible_pairs",
    "nearest_side_scan",
    "pair_turnover",
    "scratch_hull",
]
