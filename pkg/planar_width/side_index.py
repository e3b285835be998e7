"""
Weight-balanced tree of hull sides in outward-normal angle order. Every node
keeps a HalfplaneEnvelope over the sides in its subtree, so the sides whose
normals fall in a corner's antipodal arc split into O(log n) canonical subtrees
plus single nodes, and the nearest compatible side comes from one envelope
query per canonical subtree.
"""

import logging
from typing import Dict, Iterator, List, Optional, Tuple

from planar_width.dynamic_hull import antipodal_arc
from planar_width.errors import DuplicateSideError, UnknownSideError
from planar_width.geom_core import Corner, Side, SquaredDistance, Vertex, point_line_sqdist
from planar_width.halfplane_envelope import REBUILD_FRACTION, SMALL_BLOCK, Halfplane, HalfplaneEnvelope

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.25


def _half(n: Vertex) -> int:
    # 0 covers angles (-pi, 0], 1 covers (0, pi]
    return 0 if n[1] < 0 or (n[1] == 0 and n[0] > 0) else 1


def direction_cmp(n1: Vertex, n2: Vertex) -> int:
    """Compare two nonzero directions by atan2 angle in (-pi, pi]."""
    h1, h2 = _half(n1), _half(n2)
    if h1 != h2:
        return -1 if h1 < h2 else 1
    turn = n1[0] * n2[1] - n1[1] * n2[0]
    if turn > 0:
        return -1
    if turn < 0:
        return 1
    return 0


def side_cmp(s1: Side, s2: Side) -> int:
    order = direction_cmp(s1.outward_normal(), s2.outward_normal())
    if order:
        return order
    if s1.key == s2.key:
        return 0
    return -1 if s1.key < s2.key else 1


def side_halfplane(s: Side) -> Halfplane:
    a, b, c = s.coefficients()
    return Halfplane(s.key, a, b, c)


ArcRange = Tuple[Optional[Vertex], Optional[Vertex]]


def arc_ranges(c: Corner) -> List[ArcRange]:
    """Key ranges of normal directions compatible with c; None marks an open end."""
    m_lo, m_hi = antipodal_arc(c)
    if direction_cmp(m_lo, m_hi) <= 0:
        return [(m_lo, m_hi)]
    return [(m_lo, None), (None, m_hi)]


def in_arc(n: Vertex, ranges: List[ArcRange]) -> bool:
    for lo, hi in ranges:
        if (lo is None or direction_cmp(lo, n) <= 0) and (hi is None or direction_cmp(n, hi) <= 0):
            return True
    return False


class _SideNode:
    __slots__ = ("side", "normal", "left", "right", "size", "envelope")

    def __init__(self, side: Side):
        self.side = side
        self.normal = side.outward_normal()
        self.left: Optional["_SideNode"] = None
        self.right: Optional["_SideNode"] = None
        self.size = 1
        self.envelope: Optional[HalfplaneEnvelope] = None


def _weight(node: Optional[_SideNode]) -> int:
    return 1 if node is None else node.size + 1


class SideIndex:

    def __init__(
        self,
        alpha: float = DEFAULT_ALPHA,
        small_block: int = SMALL_BLOCK,
        rebuild_fraction: float = REBUILD_FRACTION,
    ):
        self.alpha = alpha
        self.small_block = small_block
        self.rebuild_fraction = rebuild_fraction
        self._root: Optional[_SideNode] = None
        self._sides: Dict[Tuple[Vertex, Vertex], Side] = {}
        self.rebuild_count = 0
        self.rebuilt_sides = 0

    def __len__(self) -> int:
        return len(self._sides)

    def __contains__(self, s: Side) -> bool:
        return s.key in self._sides

    def _new_envelope(self, sides) -> HalfplaneEnvelope:
        return HalfplaneEnvelope.from_halfplanes(
            (side_halfplane(s) for s in sides), self.small_block, self.rebuild_fraction
        )

    def _unbalanced(self, node: _SideNode) -> bool:
        w = node.size + 1
        return min(_weight(node.left), _weight(node.right)) < self.alpha * w

    def sides(self) -> List[Side]:
        return [node.side for node in self._inorder(self._root)]

    def _inorder(self, node: Optional[_SideNode]) -> Iterator[_SideNode]:
        stack = []
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield node
            node = node.right

    def insert_side(self, s: Side) -> None:
        if s.key in self._sides:
            raise DuplicateSideError("side %s -> %s already indexed" % (s.u, s.v))
        self._sides[s.key] = s
        h = side_halfplane(s)
        fresh = _SideNode(s)
        fresh.envelope = self._new_envelope([s])
        if self._root is None:
            self._root = fresh
            return
        path = []
        node = self._root
        while node is not None:
            path.append(node)
            node.size += 1
            node.envelope.insert(h)
            node = node.left if side_cmp(s, node.side) < 0 else node.right
        parent = path[-1]
        if side_cmp(s, parent.side) < 0:
            parent.left = fresh
        else:
            parent.right = fresh
        self._rebalance(path)

    def delete_side(self, s: Side) -> None:
        if s.key not in self._sides:
            raise UnknownSideError("side %s -> %s is not indexed" % (s.u, s.v))
        s = self._sides.pop(s.key)
        path = []
        node = self._root
        while True:
            path.append(node)
            order = side_cmp(s, node.side)
            if order == 0:
                break
            node = node.left if order < 0 else node.right
        for anc in path:
            anc.size -= 1
            anc.envelope.delete(s.key)
        target = node
        if target.left is not None and target.right is not None:
            succ = target.right
            path.append(succ)
            while succ.left is not None:
                succ = succ.left
                path.append(succ)
            moved = succ.side
            for between in path[path.index(target) + 1:]:
                between.size -= 1
                between.envelope.delete(moved.key)
            target.side = moved
            target.normal = succ.normal
            removed, child = succ, succ.right
        else:
            removed, child = target, target.left if target.left is not None else target.right
        path.pop()
        if not path:
            self._root = child
        elif path[-1].left is removed:
            path[-1].left = child
        else:
            path[-1].right = child
        self._rebalance(path)

    def _rebalance(self, path: List[_SideNode]) -> None:
        for depth, node in enumerate(path):
            if self._unbalanced(node):
                self._rebuild(path, depth)
                return

    def _rebuild(self, path: List[_SideNode], depth: int) -> None:
        node = path[depth]
        ordered = [n.side for n in self._inorder(node)]
        logger.debug("Rebuilding side subtree of %d sides", len(ordered))
        self.rebuild_count += 1
        self.rebuilt_sides += len(ordered)
        rebuilt = self._build(ordered, 0, len(ordered))
        if depth == 0:
            self._root = rebuilt
        elif path[depth - 1].left is node:
            path[depth - 1].left = rebuilt
        else:
            path[depth - 1].right = rebuilt

    def _build(self, ordered: List[Side], lo: int, hi: int) -> Optional[_SideNode]:
        if lo >= hi:
            return None
        mid = (lo + hi) // 2
        node = _SideNode(ordered[mid])
        node.left = self._build(ordered, lo, mid)
        node.right = self._build(ordered, mid + 1, hi)
        node.size = hi - lo
        node.envelope = self._new_envelope(ordered[lo:hi])
        return node

    def _decompose(self, node, lo, hi, lo_free, hi_free, subtrees, singles) -> None:
        if node is None:
            return
        if lo_free and hi_free:
            subtrees.append(node)
            return
        above_lo = lo_free or direction_cmp(lo, node.normal) <= 0
        below_hi = hi_free or direction_cmp(node.normal, hi) <= 0
        if above_lo and below_hi:
            singles.append(node.side)
        if above_lo:
            self._decompose(node.left, lo, hi, lo_free, below_hi, subtrees, singles)
        if below_hi:
            self._decompose(node.right, lo, hi, above_lo, hi_free, subtrees, singles)

    def canonical_cover(self, c: Corner) -> Tuple[List[Side], List[Side]]:
        """Sides in c's arc as (sides under whole canonical subtrees, single sides)."""
        covered: List[Side] = []
        singles: List[Side] = []
        for lo, hi in arc_ranges(c):
            subtrees: List[_SideNode] = []
            self._decompose(self._root, lo, hi, lo is None, hi is None, subtrees, singles)
            for sub in subtrees:
                covered.extend(n.side for n in self._inorder(sub))
        return covered, singles

    def nearest_compatible_side(self, c: Corner) -> Optional[Tuple[Side, SquaredDistance]]:
        if self._root is None:
            return None
        best: Optional[Tuple[Side, SquaredDistance]] = None
        for lo, hi in arc_ranges(c):
            subtrees: List[_SideNode] = []
            singles: List[Side] = []
            self._decompose(self._root, lo, hi, lo is None, hi is None, subtrees, singles)
            found = [(s, point_line_sqdist(s, c.apex)) for s in singles]
            for sub in subtrees:
                h, dist = sub.envelope.nearest(c.apex)
                found.append((self._sides[h.id], dist))
            for s, dist in found:
                if best is None or dist < best[1] or (dist == best[1] and s.key < best[0].key):
                    best = (s, dist)
        return best

    def audit(self) -> Optional[str]:
        """Return a description of the first structural violation, or None."""
        nodes = list(self._inorder(self._root))
        if len(nodes) != len(self._sides):
            return "side count %d differs from registry %d" % (len(nodes), len(self._sides))
        for a, b in zip(nodes, nodes[1:]):
            if side_cmp(a.side, b.side) >= 0:
                return "sides out of angular order at %s" % (b.side.key,)
        stack = [self._root] if self._root is not None else []
        while stack:
            node = stack.pop()
            members = {n.side.key for n in self._inorder(node)}
            if node.size != len(members):
                return "size mismatch at %s" % (node.side.key,)
            if set(node.envelope.ids()) != members:
                return "envelope content mismatch at %s" % (node.side.key,)
            if self._unbalanced(node):
                return "alpha balance violated at %s" % (node.side.key,)
            stack.extend(child for child in (node.left, node.right) if child is not None)
        return None
