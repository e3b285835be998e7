"""
Exact geometric primitives for planar_width: integer points, hull features
(corners and sides), the side/corner compatibility predicate and exact squared
distances. Every decision is made on integers; floats only appear when a
squared distance is formatted for display.
"""

import logging
from dataclasses import dataclass
from decimal import Decimal, localcontext
from enum import IntEnum
from functools import total_ordering
from math import gcd
from typing import Tuple

from planar_width import config
from planar_width.errors import CoordinateRangeError

logger = logging.getLogger(__name__)

Vertex = Tuple[int, int]

DISPLAY_PRECISION = 60


class Orientation(IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class Point:
    id: int
    x: int
    y: int

    @property
    def coords(self) -> Vertex:
        return (self.x, self.y)

    def check_bounds(self) -> None:
        if abs(self.x) > config.COORD_BOUND or abs(self.y) > config.COORD_BOUND:
            raise CoordinateRangeError(
                "point %s at (%d, %d) exceeds |coord| <= 2^30" % (self.id, self.x, self.y)
            )


def cross(o: Vertex, p: Vertex, q: Vertex) -> int:
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def orientation(p: Vertex, q: Vertex, r: Vertex) -> Orientation:
    value = cross(p, q, r)
    if value > 0:
        return Orientation.CCW
    if value < 0:
        return Orientation.CW
    return Orientation.COLLINEAR


@dataclass(frozen=True, order=True)
class Side:
    """Directed hull edge u -> v; the point set lies to its left."""

    u: Vertex
    v: Vertex

    @property
    def key(self) -> Tuple[Vertex, Vertex]:
        return (self.u, self.v)

    def coefficients(self) -> Tuple[int, int, int]:
        a = self.u[1] - self.v[1]
        b = self.v[0] - self.u[0]
        return a, b, -(a * self.u[0] + b * self.u[1])

    def outward_normal(self) -> Vertex:
        return (self.v[1] - self.u[1], self.u[0] - self.v[0])

    def signed_value(self, p: Vertex) -> int:
        a, b, c = self.coefficients()
        return a * p[0] + b * p[1] + c


@dataclass(frozen=True, order=True)
class Corner:
    """Wedge at a strictly convex hull vertex, identified by (prev, apex, next)."""

    prev: Vertex
    apex: Vertex
    next: Vertex

    @property
    def key(self) -> Tuple[Vertex, Vertex, Vertex]:
        return (self.prev, self.apex, self.next)

    def is_strict(self) -> bool:
        return cross(self.prev, self.apex, self.next) > 0


@total_ordering
class SquaredDistance:
    """Exact nonnegative rational num/den; den == 0 encodes +infinity."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int = 1):
        if den < 0 or num < 0:
            raise ValueError("squared distance must be nonnegative with den >= 0")
        if den == 0:
            num = 1
        self.num = num
        self.den = den

    @classmethod
    def infinite(cls) -> "SquaredDistance":
        return cls(1, 0)

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    def reduced(self) -> Tuple[int, int]:
        if self.den == 0:
            return (1, 0)
        g = gcd(self.num, self.den)
        return (self.num // g, self.den // g)

    def to_float(self) -> float:
        if self.den == 0:
            return float("inf")
        with localcontext() as ctx:
            ctx.prec = DISPLAY_PRECISION
            return float((Decimal(self.num) / Decimal(self.den)).sqrt())

    def __eq__(self, other):
        if not isinstance(other, SquaredDistance):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __lt__(self, other):
        if not isinstance(other, SquaredDistance):
            return NotImplemented
        return self.num * other.den < other.num * self.den

    def __hash__(self):
        return hash(self.reduced())

    def __repr__(self):
        if self.den == 0:
            return "SquaredDistance(inf)"
        return "SquaredDistance(%d/%d)" % (self.num, self.den)


ZERO = SquaredDistance(0, 1)
INFINITE = SquaredDistance.infinite()


def cmp_sqdist(d1: SquaredDistance, d2: SquaredDistance) -> Ordering:
    left = d1.num * d2.den
    right = d2.num * d1.den
    if left < right:
        return Ordering.LT
    if left > right:
        return Ordering.GT
    return Ordering.EQ


def is_compatible(s: Side, c: Corner) -> bool:
    # The wedge must stay on the far side of s's boundary translated to the apex.
    a, b, _ = s.coefficients()
    ax, ay = c.apex
    return (
        a * (c.prev[0] - ax) + b * (c.prev[1] - ay) <= 0
        and a * (c.next[0] - ax) + b * (c.next[1] - ay) <= 0
    )


def point_line_sqdist(s: Side, p: Vertex) -> SquaredDistance:
    a, b, c = s.coefficients()
    value = a * p[0] + b * p[1] + c
    return SquaredDistance(value * value, a * a + b * b)


def squared_distance(s: Side, c: Corner) -> SquaredDistance:
    if not is_compatible(s, c):
        return INFINITE
    return point_line_sqdist(s, c.apex)


def hull_sides(vertices) -> list:
    n = len(vertices)
    if n < 3:
        return []
    return [Side(vertices[i], vertices[(i + 1) % n]) for i in range(n)]


def hull_corners(vertices) -> list:
    n = len(vertices)
    if n < 3:
        return []
    return [Corner(vertices[i - 1], vertices[i], vertices[(i + 1) % n]) for i in range(n)]
