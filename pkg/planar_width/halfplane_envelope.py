"""
Dynamic set of halfplanes answering "which boundary is nearest to a point inside
all of them", exactly. Halfplanes live in immutable blocks of roughly sqrt(m)
members plus an insertion buffer; a delete rebuilds only its block. Large blocks
prefilter with a numpy float64 evaluation whose error is bounded, then settle
the surviving candidates with exact integer arithmetic.

Cost: insert is O(1) amortized plus one block compile every sqrt(m) inserts;
delete is O(sqrt m). nearest touches every member, so it is O(m) arithmetic,
of which all but O(sqrt m) block dispatches and the surviving candidates run
vectorized in numpy. There is no sublinear point locator inside a block.
"""

import logging
from dataclasses import dataclass
from math import isqrt
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from planar_width.errors import DuplicateIdError, NoHalfplanesError, PreconditionViolatedError, UnknownIdError
from planar_width.geom_core import SquaredDistance, Vertex

logger = logging.getLogger(__name__)

SMALL_BLOCK = 32
REBUILD_FRACTION = 0.5

# Relative slack on float64 evaluation of a*x + b*y + c with |coeffs| < 2^63.
_EVAL_SLACK = 4.5e-16
_RATIO_SLACK = 1e-12


@dataclass(frozen=True)
class Halfplane:
    """a*x + b*y + c >= 0 on the contained side; id is any totally ordered key."""

    id: Any
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise ValueError("halfplane %r has a zero normal" % (self.id,))

    def value(self, q: Vertex) -> int:
        return self.a * q[0] + self.b * q[1] + self.c

    def sqdist(self, q: Vertex) -> SquaredDistance:
        value = self.a * q[0] + self.b * q[1] + self.c
        if value < 0:
            raise PreconditionViolatedError("query %s lies outside halfplane %r" % (q, self.id))
        return SquaredDistance(value * value, self.a * self.a + self.b * self.b)


Hit = Tuple[Halfplane, SquaredDistance]


def _better(hit: Optional[Hit], other: Optional[Hit]) -> Optional[Hit]:
    if hit is None:
        return other
    if other is None:
        return hit
    if other[1] < hit[1] or (other[1] == hit[1] and other[0].id < hit[0].id):
        return other
    return hit


def scan_nearest(halfplanes: Iterable[Halfplane], q: Vertex) -> Optional[Hit]:
    best: Optional[Hit] = None
    for h in halfplanes:
        best = _better(best, (h, h.sqdist(q)))
    return best


class EnvelopeBlock:
    """Static group of halfplanes with a float prefilter when it is large enough."""

    __slots__ = ("members", "_coeffs", "_abs", "_norm2")

    def __init__(self, members: Iterable[Halfplane], small_block: int = SMALL_BLOCK):
        self.members: Tuple[Halfplane, ...] = tuple(members)
        self._coeffs = None
        if len(self.members) >= small_block:
            coeffs = np.array([(h.a, h.b, h.c) for h in self.members], dtype=np.float64)
            self._coeffs = coeffs
            self._abs = np.abs(coeffs)
            self._norm2 = coeffs[:, 0] ** 2 + coeffs[:, 1] ** 2

    def __len__(self) -> int:
        return len(self.members)

    def without(self, hid: Any, small_block: int = SMALL_BLOCK) -> "EnvelopeBlock":
        return EnvelopeBlock((h for h in self.members if h.id != hid), small_block)

    def nearest(self, q: Vertex) -> Optional[Hit]:
        if self._coeffs is None:
            return scan_nearest(self.members, q)
        x, y = float(q[0]), float(q[1])
        values = self._coeffs[:, 0] * x + self._coeffs[:, 1] * y + self._coeffs[:, 2]
        err = (self._abs[:, 0] * abs(x) + self._abs[:, 1] * abs(y) + self._abs[:, 2]) * _EVAL_SLACK
        if np.any(values < -err):
            bad = int(np.argmax(values < -err))
            raise PreconditionViolatedError(
                "query %s lies outside halfplane %r" % (q, self.members[bad].id)
            )
        mag = np.abs(values)
        lo = np.maximum(mag - err, 0.0) ** 2 / self._norm2 * (1.0 - _RATIO_SLACK)
        hi = (mag + err) ** 2 / self._norm2 * (1.0 + _RATIO_SLACK)
        candidates = np.flatnonzero(lo <= hi.min())
        return scan_nearest((self.members[i] for i in candidates), q)


class HalfplaneEnvelope:
    """Insert, delete and nearest-boundary queries over a dynamic halfplane set."""

    def __init__(self, small_block: int = SMALL_BLOCK, rebuild_fraction: float = REBUILD_FRACTION):
        self.small_block = small_block
        self.rebuild_fraction = rebuild_fraction
        self._blocks: List[EnvelopeBlock] = []
        self._buffer: Dict[Any, Halfplane] = {}
        self._where: Dict[Any, int] = {}
        self._deleted_since_rebuild = 0
        self._size_at_rebuild = 0
        self.rebuilds = 0

    @classmethod
    def from_halfplanes(
        cls,
        halfplanes: Iterable[Halfplane],
        small_block: int = SMALL_BLOCK,
        rebuild_fraction: float = REBUILD_FRACTION,
    ) -> "HalfplaneEnvelope":
        env = cls(small_block, rebuild_fraction)
        members = list(halfplanes)
        ids = set()
        for h in members:
            if h.id in ids:
                raise DuplicateIdError("halfplane %r inserted twice" % (h.id,))
            ids.add(h.id)
        env._compile(members)
        return env

    def __len__(self) -> int:
        return len(self._where) + len(self._buffer)

    def __contains__(self, hid: Any) -> bool:
        return hid in self._where or hid in self._buffer

    def ids(self) -> List[Any]:
        return list(self._where) + list(self._buffer)

    def halfplanes(self) -> List[Halfplane]:
        out = [h for block in self._blocks for h in block.members]
        out.extend(self._buffer.values())
        return out

    @property
    def block_size(self) -> int:
        return max(self.small_block, isqrt(len(self)))

    def _compile(self, members: List[Halfplane]) -> None:
        self._blocks = []
        self._where = {}
        self._buffer = {}
        size = max(self.small_block, isqrt(len(members)))
        for start in range(0, len(members), size):
            index = len(self._blocks)
            chunk = members[start:start + size]
            self._blocks.append(EnvelopeBlock(chunk, self.small_block))
            for h in chunk:
                self._where[h.id] = index
        self._deleted_since_rebuild = 0
        self._size_at_rebuild = len(members)

    def insert(self, h: Halfplane) -> None:
        if h.id in self:
            raise DuplicateIdError("halfplane %r inserted twice" % (h.id,))
        self._buffer[h.id] = h
        if len(self._buffer) >= self.block_size:
            index = len(self._blocks)
            self._blocks.append(EnvelopeBlock(self._buffer.values(), self.small_block))
            for hid in self._buffer:
                self._where[hid] = index
            self._buffer = {}

    def delete(self, hid: Any) -> None:
        if hid in self._buffer:
            del self._buffer[hid]
            return
        index = self._where.pop(hid, None)
        if index is None:
            raise UnknownIdError("halfplane %r is not present" % (hid,))
        self._blocks[index] = self._blocks[index].without(hid, self.small_block)
        self._deleted_since_rebuild += 1
        if self._deleted_since_rebuild > self.rebuild_fraction * self._size_at_rebuild:
            self.rebuilds += 1
            self._compile(self.halfplanes())

    def nearest(self, q: Vertex) -> Hit:
        best: Optional[Hit] = None
        for block in self._blocks:
            if len(block):
                best = _better(best, block.nearest(q))
        best = _better(best, scan_nearest(self._buffer.values(), q))
        if best is None:
            raise NoHalfplanesError("envelope holds no halfplanes")
        return best
