"""
Dynamic width maintainer. Every hull corner points at its nearest compatible
side; the (distance, corner, side) triples live in a lazily pruned heap whose
minimum is the squared width. An update only touches the corners and sides in
its HullDiff, the corners orphaned by removed sides, and the at most two
corners compatible with each new side.
"""

import heapq
import logging
import time
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Set, Tuple, Union

from planar_width.config import Settings
from planar_width.dynamic_hull import DynamicHull, HullDiff
from planar_width.errors import DynWidthError
from planar_width.geom_core import ZERO, Corner, Point, Side, SquaredDistance, is_compatible, squared_distance
from planar_width.side_index import SideIndex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Insert:
    point: Point


@dataclass(frozen=True)
class Delete:
    id: int


Op = Union[Insert, Delete]
Nearest = Tuple[Side, SquaredDistance]


@dataclass
class CornerEntry:
    corner: Corner
    nearest: Optional[Nearest] = None
    generation: int = 0


@dataclass(frozen=True)
class WidthReport:
    width_sq: SquaredDistance
    width: float
    witness: Optional[Tuple[Side, Corner]] = None
    k: int = 0
    timing_ns: int = 0
    diff: HullDiff = field(default_factory=HullDiff)
    pointer_writes: int = 0
    orphans: int = 0


@dataclass
class EngineStats:
    updates: int = 0
    sum_k: int = 0
    pointer_writes: int = 0
    orphans: int = 0
    max_sides_added: int = 0
    max_corners_added: int = 0
    max_sides_removed: int = 0
    max_corners_removed: int = 0

    def record(self, diff: HullDiff, writes: int, orphans: int) -> None:
        self.updates += 1
        self.sum_k += diff.k
        self.pointer_writes += writes
        self.orphans += orphans
        self.max_sides_added = max(self.max_sides_added, len(diff.sides_added))
        self.max_corners_added = max(self.max_corners_added, len(diff.corners_added))
        self.max_sides_removed = max(self.max_sides_removed, len(diff.sides_removed))
        self.max_corners_removed = max(self.max_corners_removed, len(diff.corners_removed))


def _closer(candidate: Nearest, current: Optional[Nearest]) -> bool:
    if current is None:
        return True
    return (candidate[1], candidate[0].key) < (current[1], current[0].key)


class WidthEngine:

    def __init__(self, settings: Optional[Settings] = None, fault_inject: bool = False):
        settings = settings or Settings()
        self.settings = settings
        self.fault_inject = fault_inject
        self.hull = DynamicHull(settings.alpha)
        self.side_index = SideIndex(settings.alpha, settings.envelope_small_block, settings.envelope_rebuild_fraction)
        self.stats = EngineStats()
        self._entries: Dict[Corner, CornerEntry] = {}
        self._pointers: Dict[Side, Set[Corner]] = defaultdict(set)
        self._heap: List[tuple] = []
        self._generation = 0
        self._write_violation: Optional[str] = None

    def __len__(self) -> int:
        return len(self.hull)

    def entries(self) -> Dict[Corner, CornerEntry]:
        return dict(self._entries)

    def apply(self, op: Op) -> WidthReport:
        start = time.perf_counter_ns()
        if isinstance(op, Insert):
            diff = self.hull.insert_point(op.point)
        elif isinstance(op, Delete):
            diff = self.hull.delete_point(op.id)
        else:
            raise TypeError("unsupported operation %r" % (op,))
        writes, orphans = self._apply_diff(diff)
        report = self.width()
        elapsed = time.perf_counter_ns() - start
        self.stats.record(diff, writes, orphans)
        return replace(report, k=diff.k, timing_ns=elapsed, diff=diff, pointer_writes=writes, orphans=orphans)

    def insert(self, point_id: int, x: int, y: int) -> WidthReport:
        return self.apply(Insert(Point(point_id, x, y)))

    def delete(self, point_id: int) -> WidthReport:
        return self.apply(Delete(point_id))

    def _set_pointer(self, c: Corner, nearest: Optional[Nearest]) -> None:
        old = self._entries.get(c)
        if old is not None and old.nearest is not None:
            self._unlink(old.nearest[0], c)
        self._generation += 1
        self._entries[c] = CornerEntry(c, nearest, self._generation)
        if nearest is not None:
            side, dist = nearest
            self._pointers[side].add(c)
            heapq.heappush(self._heap, (dist, c, side, self._generation))

    def _unlink(self, side: Side, c: Corner) -> None:
        users = self._pointers.get(side)
        if users is not None:
            users.discard(c)
            if not users:
                del self._pointers[side]

    def _drop(self, c: Corner) -> None:
        entry = self._entries.pop(c, None)
        if entry is not None and entry.nearest is not None:
            self._unlink(entry.nearest[0], c)

    def _apply_diff(self, diff: HullDiff) -> Tuple[int, int]:
        if diff.is_empty:
            return 0, 0
        writes = 0
        for c in diff.corners_removed:
            self._drop(c)
        orphans: Set[Corner] = set()
        for s in diff.sides_removed:
            self.side_index.delete_side(s)
            orphans |= self._pointers.pop(s, set())
        for s in diff.sides_added:
            self.side_index.insert_side(s)
        for c in diff.corners_added:
            self._set_pointer(c, self.side_index.nearest_compatible_side(c))
            writes += 1
        for s in diff.sides_added:
            for c in self.hull.compatible_corners(s):
                if c in diff.corners_added or c in orphans:
                    continue
                candidate = (s, squared_distance(s, c))
                if _closer(candidate, self._entries[c].nearest):
                    self._set_pointer(c, candidate)
                    writes += 1
        for c in orphans:
            self._set_pointer(c, self.side_index.nearest_compatible_side(c))
            writes += 1
        bound = len(diff.corners_added) + len(orphans) + 2 * len(diff.sides_added)
        if writes > bound and self._write_violation is None:
            self._write_violation = "pointer writes %d exceed locality bound %d" % (writes, bound)
            logger.error(self._write_violation)
        self._compact_heap()
        return writes, len(orphans)

    def _live(self, item: tuple) -> bool:
        entry = self._entries.get(item[1])
        return entry is not None and entry.generation == item[3]

    def _compact_heap(self) -> None:
        if len(self._heap) > 2 * len(self._entries) + 64:
            self._heap = [item for item in self._heap if self._live(item)]
            heapq.heapify(self._heap)

    def _peek(self) -> Optional[tuple]:
        while self._heap and not self._live(self._heap[0]):
            heapq.heappop(self._heap)
        return self._heap[0] if self._heap else None

    def width(self) -> WidthReport:
        if self.hull.is_degenerate:
            return WidthReport(ZERO, 0.0)
        top = self._peek()
        if top is None:
            raise DynWidthError("no corner-side pair on a non-degenerate hull")
        dist, corner, side, _ = top
        if self.fault_inject:
            dist = SquaredDistance(dist.num + dist.den, dist.den)
        return WidthReport(dist, dist.to_float(), (side, corner))

    def corrupt_pointer(self, c: Corner, side: Side) -> None:
        """Point c at an arbitrary side; only used to exercise audit()."""
        self._set_pointer(c, (side, squared_distance(side, c)))

    def audit(self) -> Optional[str]:
        """Full O(n^2) consistency check; the first violation found, or None."""
        from planar_width.oracle import nearest_side_scan, scratch_hull

        live = [p.coords for p in self.hull.live_points()]
        expected = scratch_hull(live)
        if self.hull.vertices() != expected:
            return "hull differs from scratch recomputation"
        problem = self.hull.audit() or self.side_index.audit()
        if problem:
            return problem
        corners = set(self.hull.corners())
        if set(self._entries) != corners:
            return "corner entries differ from hull corners"
        sides = list(self.hull.sides())
        if set(self.side_index.sides()) != set(sides):
            return "side index differs from hull sides"
        for c, entry in self._entries.items():
            truth = nearest_side_scan(c, sides)
            if entry.nearest is None:
                if truth is not None:
                    return "pointer-missing at corner %s" % (c.key,)
                continue
            side, dist = entry.nearest
            if not is_compatible(side, c) or squared_distance(side, c) != dist:
                return "pointer-invalid at corner %s" % (c.key,)
            if truth is None or truth[1] < dist:
                return "pointer-suboptimal at corner %s" % (c.key,)
        queued = {item[1] for item in self._heap if self._live(item)}
        with_pointer = {c for c, e in self._entries.items() if e.nearest is not None}
        if queued != with_pointer:
            return "priority queue membership differs from set pointers"
        return self._write_violation
