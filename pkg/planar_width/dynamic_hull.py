"""
Dynamic convex hull for planar_width, in the Overmars-van Leeuwen manner: a
leaf-oriented weight-balanced tree over the distinct live coordinates (sorted
lexicographically) where every internal node stores the upper and lower bridge
joining its children's hull chains. Hull chains are never materialized; they
are navigated through the bridges. A linked list of the current strict hull
vertices is kept beside the tree so each update can report the corners and
sides it created and destroyed (its HullDiff).
"""

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from planar_width.errors import DuplicateIdError, EmptyHullError, StaleSideError, UnknownIdError
from planar_width.geom_core import (
    Corner,
    Point,
    Side,
    SquaredDistance,
    Vertex,
    cross,
    hull_corners,
    hull_sides,
    squared_distance,
)

logger = logging.getLogger(__name__)

UPPER = 0
LOWER = 1
CHAIN_SIGNS = (1, -1)
DEFAULT_ALPHA = 0.25


@dataclass(frozen=True)
class HullDiff:
    corners_removed: FrozenSet[Corner] = field(default_factory=frozenset)
    corners_added: FrozenSet[Corner] = field(default_factory=frozenset)
    sides_removed: FrozenSet[Side] = field(default_factory=frozenset)
    sides_added: FrozenSet[Side] = field(default_factory=frozenset)

    @property
    def k(self) -> int:
        return (
            len(self.corners_removed)
            + len(self.corners_added)
            + len(self.sides_removed)
            + len(self.sides_added)
        )

    @property
    def is_empty(self) -> bool:
        return self.k == 0

    def inverse(self) -> "HullDiff":
        return HullDiff(
            corners_removed=self.corners_added,
            corners_added=self.corners_removed,
            sides_removed=self.sides_added,
            sides_added=self.sides_removed,
        )


EMPTY_DIFF = HullDiff()


def _reduce(v: Vertex) -> Vertex:
    g = gcd(v[0], v[1]) or 1
    return (v[0] // g, v[1] // g)


def normal_cone(c: Corner) -> Tuple[Vertex, Vertex]:
    """Outward normals of the edges prev->apex and apex->next, CCW from n_lo to n_hi."""
    n_lo = (c.apex[1] - c.prev[1], c.prev[0] - c.apex[0])
    n_hi = (c.next[1] - c.apex[1], c.apex[0] - c.next[0])
    return _reduce(n_lo), _reduce(n_hi)


def antipodal_arc(c: Corner) -> Tuple[Vertex, Vertex]:
    n_lo, n_hi = normal_cone(c)
    return (-n_lo[0], -n_lo[1]), (-n_hi[0], -n_hi[1])


class _Node:
    __slots__ = ("key", "left", "right", "parent", "weight", "count", "bridges")

    def __init__(self, key: Optional[Vertex], count: int = 1):
        self.key = key
        self.left: Optional["_Node"] = None
        self.right: Optional["_Node"] = None
        self.parent: Optional["_Node"] = None
        self.weight = 1
        self.count = count
        self.bridges: Optional[Tuple[Tuple[Vertex, Vertex], Tuple[Vertex, Vertex]]] = None


def _extreme(node: _Node, dx: int, dy: int, chain: int) -> Vertex:
    # Lexicographically last maximizer of dx*x + dy*y over the subtree.
    while node.left is not None:
        cl, cr = node.bridges[chain]
        if dx * (cr[0] - cl[0]) + dy * (cr[1] - cl[1]) >= 0:
            node = node.right
        else:
            node = node.left
    return node.key


def _compute_bridge(node: _Node, chain: int) -> Tuple[Vertex, Vertex]:
    sign = CHAIN_SIGNS[chain]
    right = node.right
    u = node.left
    while u.left is not None:
        bl, br = u.bridges[chain]
        dx = -(br[1] - bl[1]) * sign
        dy = (br[0] - bl[0]) * sign
        q = _extreme(right, dx, dy, chain)
        if dx * (q[0] - bl[0]) + dy * (q[1] - bl[1]) >= 0:
            u = u.left
        else:
            u = u.right
    t = u.key
    u = right
    while u.left is not None:
        bl, br = u.bridges[chain]
        turn = (bl[0] - t[0]) * (br[1] - t[1]) - (bl[1] - t[1]) * (br[0] - t[0])
        if sign * turn >= 0:
            u = u.right
        else:
            u = u.left
    return t, u.key


def _below_chain(node: _Node, p: Vertex, chain: int) -> bool:
    # p strictly on the inner side of the chain at abscissa p[0], which must lie
    # strictly inside the subtree's x-range.
    sign = CHAIN_SIGNS[chain]
    while node.left is not None:
        bl, br = node.bridges[chain]
        if bl[0] < p[0] < br[0]:
            return sign * cross(bl, br, p) < 0
        if p[0] == bl[0] or p[0] == br[0]:
            if bl[0] == br[0]:
                return False
            v = bl if p[0] == bl[0] else br
            return sign * (p[1] - v[1]) < 0
        node = node.left if p[0] < bl[0] else node.right
    return False


def _strictly_inside(node: _Node, p: Vertex) -> bool:
    """True when p is in the open interior of the hull of node's leaves."""
    if node.left is None:
        return False
    lo = node
    while lo.left is not None:
        lo = lo.left
    hi = node
    while hi.right is not None:
        hi = hi.right
    if not lo.key[0] < p[0] < hi.key[0]:
        return False
    return _below_chain(node, p, UPPER) and _below_chain(node, p, LOWER)


class _HullTree:
    """Leaf-oriented BB[alpha] tree of distinct coordinates with per-node bridges."""

    def __init__(self, alpha: float = DEFAULT_ALPHA):
        self.alpha = alpha
        self.root: Optional[_Node] = None
        self.rebuilds = 0
        self.bridge_updates = 0

    def __len__(self) -> int:
        return 0 if self.root is None else self.root.weight

    def _set_bridges(self, node: _Node) -> None:
        self.bridge_updates += 1
        node.bridges = (_compute_bridge(node, UPPER), _compute_bridge(node, LOWER))

    def _replace_child(self, parent: Optional[_Node], old: _Node, new: _Node) -> None:
        new.parent = parent
        if parent is None:
            self.root = new
        elif parent.left is old:
            parent.left = new
        else:
            parent.right = new

    def _find_leaf(self, key: Vertex) -> Optional[_Node]:
        node = self.root
        if node is None:
            return None
        while node.left is not None:
            node = node.left if key <= node.key else node.right
        return node

    def count(self, key: Vertex) -> int:
        leaf = self._find_leaf(key)
        return leaf.count if leaf is not None and leaf.key == key else 0

    def insert(self, key: Vertex) -> bool:
        """Add one copy of key; True when key is a new distinct coordinate."""
        if self.root is None:
            self.root = _Node(key)
            return True
        leaf = self._find_leaf(key)
        if leaf.key == key:
            leaf.count += 1
            return False
        new_leaf = _Node(key)
        parent = leaf.parent
        inner = _Node(None)
        if key < leaf.key:
            inner.left, inner.right = new_leaf, leaf
        else:
            inner.left, inner.right = leaf, new_leaf
        inner.key = inner.left.key
        new_leaf.parent = inner
        leaf.parent = inner
        self._replace_child(parent, leaf, inner)
        self._refresh_upward(inner, key)
        return True

    def delete(self, key: Vertex) -> bool:
        """Drop one copy of key; True when the coordinate left the tree."""
        leaf = self._find_leaf(key)
        if leaf is None or leaf.key != key:
            raise KeyError(key)
        if leaf.count > 1:
            leaf.count -= 1
            return False
        parent = leaf.parent
        if parent is None:
            self.root = None
            return True
        sibling = parent.right if parent.left is leaf else parent.left
        grand = parent.parent
        self._replace_child(grand, parent, sibling)
        if grand is not None:
            self._refresh_upward(grand, key)
        return True

    def _refresh_upward(self, node: _Node, key: Vertex) -> None:
        """Fix weights from node to the root, rebalance, then recompute bridges.

        key is the coordinate just added or removed. Bridges are recomputed
        upward only until a subtree whose hull holds key strictly inside; that
        hull is the same with or without key, so every bridge above it is too.
        """
        path = []
        cur = node
        while cur is not None:
            cur.weight = cur.left.weight + cur.right.weight
            path.append(cur)
            cur = cur.parent
        scapegoat = None
        for cur in path:
            if min(cur.left.weight, cur.right.weight) < self.alpha * cur.weight:
                scapegoat = cur
        if scapegoat is not None:
            cur = self._rebuild(scapegoat)
        else:
            cur = node
            self._set_bridges(cur)
        while not _strictly_inside(cur, key):
            cur = cur.parent
            if cur is None:
                return
            self._set_bridges(cur)

    def _rebuild(self, node: _Node) -> _Node:
        self.rebuilds += 1
        leaves = list(self._leaves(node))
        logger.debug("Rebuilding hull subtree of %d coordinates", len(leaves))
        parent = node.parent
        rebuilt = self._build(leaves, 0, len(leaves))
        self._replace_child(parent, node, rebuilt)
        return rebuilt

    def _build(self, leaves: List[_Node], lo: int, hi: int) -> _Node:
        if hi - lo == 1:
            leaf = leaves[lo]
            leaf.left = leaf.right = None
            leaf.weight = 1
            leaf.bridges = None
            return leaf
        mid = (lo + hi) // 2
        left = self._build(leaves, lo, mid)
        right = self._build(leaves, mid, hi)
        inner = _Node(leaves[mid - 1].key)
        inner.left, inner.right = left, right
        left.parent = inner
        right.parent = inner
        inner.weight = left.weight + right.weight
        self._set_bridges(inner)
        return inner

    def _leaves(self, node: _Node) -> Iterator[_Node]:
        stack = [node]
        while stack:
            cur = stack.pop()
            if cur.left is None:
                yield cur
            else:
                stack.append(cur.right)
                stack.append(cur.left)

    def keys(self) -> Iterator[Vertex]:
        if self.root is not None:
            for leaf in self._leaves(self.root):
                yield leaf.key

    def first(self) -> Vertex:
        node = self.root
        while node.left is not None:
            node = node.left
        return node.key

    def last(self) -> Vertex:
        node = self.root
        while node.right is not None:
            node = node.right
        return node.key

    def chain_contains(self, key: Vertex, chain: int) -> bool:
        node = self.root
        if node is None:
            return False
        while node.left is not None:
            bl, br = node.bridges[chain]
            if key <= node.key:
                if key > bl:
                    return False
                node = node.left
            else:
                if key < br:
                    return False
                node = node.right
        return node.key == key

    def chain_next(self, key: Vertex, chain: int) -> Optional[Vertex]:
        node = self.root
        while node.left is not None:
            bl, br = node.bridges[chain]
            if key <= node.key:
                if key == bl:
                    return br
                node = node.left
            else:
                node = node.right
        return None

    def chain_prev(self, key: Vertex, chain: int) -> Optional[Vertex]:
        node = self.root
        while node.left is not None:
            bl, br = node.bridges[chain]
            if key > node.key:
                if key == br:
                    return bl
                node = node.right
            else:
                node = node.left
        return None

    def is_hull_vertex(self, key: Vertex) -> bool:
        return self.chain_contains(key, UPPER) or self.chain_contains(key, LOWER)

    # CCW order is the lower chain left to right, then the upper chain right to left.
    def hull_next(self, key: Vertex) -> Vertex:
        if key != self.last() and self.chain_contains(key, LOWER):
            return self.chain_next(key, LOWER)
        return self.chain_prev(key, UPPER)

    def hull_prev(self, key: Vertex) -> Vertex:
        if key != self.last() and self.chain_contains(key, UPPER):
            return self.chain_next(key, UPPER)
        return self.chain_prev(key, LOWER)

    def hull_vertices(self) -> List[Vertex]:
        if self.root is None:
            return []
        start = self.first()
        if start == self.last():
            return [start]
        out = [start]
        cur = self.hull_next(start)
        while cur != start:
            out.append(cur)
            cur = self.hull_next(cur)
        return out

    def extreme(self, dx: int, dy: int) -> Vertex:
        chain = UPPER if dy > 0 or (dy == 0 and dx < 0) else LOWER
        return _extreme(self.root, dx, dy, chain)

    def audit(self) -> Optional[str]:
        """Return a description of the first structural violation, or None."""
        if self.root is None:
            return None
        keys = list(self.keys())
        if any(a >= b for a, b in zip(keys, keys[1:])):
            return "leaves out of order"
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.left is None:
                continue
            if node.weight != node.left.weight + node.right.weight:
                return "weight mismatch at split %s" % (node.key,)
            if min(node.left.weight, node.right.weight) < self.alpha * node.weight:
                return "alpha balance violated at split %s" % (node.key,)
            for chain in (UPPER, LOWER):
                if node.bridges[chain] != _compute_bridge(node, chain):
                    return "stale bridge at split %s" % (node.key,)
            stack.append(node.left)
            stack.append(node.right)
        return None


class DynamicHull:
    """Convex hull of a live point multiset with per-update feature diffs."""

    def __init__(self, alpha: float = DEFAULT_ALPHA):
        self._tree = _HullTree(alpha)
        self._points: Dict[int, Point] = {}
        self._succ: Dict[Vertex, Vertex] = {}
        self._pred: Dict[Vertex, Vertex] = {}
        self._small: List[Vertex] = []

    def __len__(self) -> int:
        return len(self._points)

    def __contains__(self, point_id: int) -> bool:
        return point_id in self._points

    @property
    def rebuilds(self) -> int:
        return self._tree.rebuilds

    @property
    def bridge_updates(self) -> int:
        return self._tree.bridge_updates

    @property
    def is_degenerate(self) -> bool:
        return not self._succ

    def live_points(self) -> List[Point]:
        return list(self._points.values())

    def vertices(self) -> List[Vertex]:
        if self.is_degenerate:
            return list(self._small)
        start = min(self._succ)
        out = [start]
        cur = self._succ[start]
        while cur != start:
            out.append(cur)
            cur = self._succ[cur]
        return out

    def corner_at(self, apex: Vertex) -> Corner:
        return Corner(self._pred[apex], apex, self._succ[apex])

    def corners(self) -> Iterator[Corner]:
        for apex in self._succ:
            yield self.corner_at(apex)

    def sides(self) -> Iterator[Side]:
        for u, v in self._succ.items():
            yield Side(u, v)

    def has_side(self, s: Side) -> bool:
        return self._succ.get(s.u) == s.v

    def insert_point(self, p: Point) -> HullDiff:
        if p.id in self._points:
            raise DuplicateIdError("point id %s is already live" % p.id)
        p.check_bounds()
        key = p.coords
        self._points[p.id] = p
        if not self._tree.insert(key):
            return EMPTY_DIFF
        if self.is_degenerate:
            return self._resync()
        if not self._tree.is_hull_vertex(key):
            return EMPTY_DIFF
        u = self._tree.hull_prev(key)
        w = self._tree.hull_next(key)
        if u not in self._succ or w not in self._succ:
            logger.debug("Hull neighbors of %s not on the old hull, resyncing", key)
            return self._resync()
        hidden = []
        cur = self._succ[u]
        while cur != w:
            hidden.append(cur)
            cur = self._succ[cur]
        old_chain = [u] + hidden + [w]
        corners_removed = frozenset(self.corner_at(x) for x in old_chain)
        sides_removed = frozenset(Side(a, b) for a, b in zip(old_chain, old_chain[1:]))
        for x in hidden:
            del self._succ[x]
            del self._pred[x]
        self._link([u, key, w])
        corners_added = frozenset(self.corner_at(x) for x in (u, key, w))
        sides_added = frozenset((Side(u, key), Side(key, w)))
        return HullDiff(corners_removed, corners_added, sides_removed, sides_added)

    def delete_point(self, point_id: int) -> HullDiff:
        p = self._points.pop(point_id, None)
        if p is None:
            raise UnknownIdError("point id %s is not live" % point_id)
        key = p.coords
        if not self._tree.delete(key):
            return EMPTY_DIFF
        if self.is_degenerate:
            return self._resync()
        if key not in self._succ:
            return EMPTY_DIFF
        u = self._pred[key]
        w = self._succ[key]
        exposed = []
        cur = self._tree.hull_next(u)
        while cur != w:
            exposed.append(cur)
            cur = self._tree.hull_next(cur)
        if len(self._succ) - 1 + len(exposed) < 3:
            return self._resync()
        old_chain = [u, key, w]
        corners_removed = frozenset(self.corner_at(x) for x in old_chain)
        sides_removed = frozenset((Side(u, key), Side(key, w)))
        del self._succ[key]
        del self._pred[key]
        new_chain = [u] + exposed + [w]
        self._link(new_chain)
        corners_added = frozenset(self.corner_at(x) for x in new_chain)
        sides_added = frozenset(Side(a, b) for a, b in zip(new_chain, new_chain[1:]))
        return HullDiff(corners_removed, corners_added, sides_removed, sides_added)

    def _link(self, chain: List[Vertex]) -> None:
        for a, b in zip(chain, chain[1:]):
            self._succ[a] = b
            self._pred[b] = a

    def _resync(self) -> HullDiff:
        """Full feature recompute; only reached when the old or new hull is degenerate."""
        old = self.vertices()
        new = self._tree.hull_vertices()
        old_corners, old_sides = set(hull_corners(old)), set(hull_sides(old))
        new_corners, new_sides = set(hull_corners(new)), set(hull_sides(new))
        self._succ.clear()
        self._pred.clear()
        if len(new) >= 3:
            self._small = []
            self._link(new + [new[0]])
        else:
            self._small = new
        return HullDiff(
            corners_removed=frozenset(old_corners - new_corners),
            corners_added=frozenset(new_corners - old_corners),
            sides_removed=frozenset(old_sides - new_sides),
            sides_added=frozenset(new_sides - old_sides),
        )

    def extreme_vertices(self, d: Vertex) -> Tuple[Vertex, ...]:
        dx, dy = d
        if dx == 0 and dy == 0:
            raise ValueError("direction must be nonzero")
        if not self._points:
            raise EmptyHullError("hull is empty")
        if self.is_degenerate:
            best = max(dx * x + dy * y for x, y in self._small)
            return tuple(v for v in sorted(self._small) if dx * v[0] + dy * v[1] == best)
        v = self._tree.extreme(dx, dy)
        best = dx * v[0] + dy * v[1]
        prev, nxt = self._pred[v], self._succ[v]
        if dx * prev[0] + dy * prev[1] == best:
            return (prev, v)
        if dx * nxt[0] + dy * nxt[1] == best:
            return (v, nxt)
        return (v,)

    def compatible_corners(self, s: Side) -> Tuple[Corner, ...]:
        if not self.has_side(s):
            raise StaleSideError("side %s -> %s is not on the current hull" % (s.u, s.v))
        a, b, _ = s.coefficients()
        return tuple(self.corner_at(v) for v in self.extreme_vertices((a, b)))

    def nearest_corner(self, s: Side) -> Tuple[Corner, SquaredDistance]:
        return min(
            ((c, squared_distance(s, c)) for c in self.compatible_corners(s)),
            key=lambda pair: (pair[1], pair[0]),
        )

    def audit(self) -> Optional[str]:
        return self._tree.audit()
