import math
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from planar_width.geom_core import Corner, Point, Side, hull_sides  # noqa: E402
from planar_width.halfplane_envelope import Halfplane  # noqa: E402
from planar_width.oracle import scratch_hull  # noqa: E402

SQUARE = [(0, 0), (2, 0), (2, 2), (0, 2)]
TRIANGLE = [(0, 0), (4, 0), (0, 3)]


@pytest.fixture
def square():
    return list(SQUARE)


@pytest.fixture
def triangle():
    return list(TRIANGLE)


@pytest.fixture
def square_points():
    return [Point(i, x, y) for i, (x, y) in enumerate(SQUARE)]


@pytest.fixture
def triangle_points():
    return [Point(i, x, y) for i, (x, y) in enumerate(TRIANGLE)]


@pytest.fixture
def bottom_side():
    return Side((0, 0), (2, 0))


@pytest.fixture
def hypotenuse():
    return Side((4, 0), (0, 3))


@pytest.fixture
def corner_at():
    """Corner of a CCW vertex list at the given apex."""
    def make(vertices, apex):
        i = vertices.index(apex)
        return Corner(vertices[i - 1], apex, vertices[(i + 1) % len(vertices)])
    return make


@pytest.fixture
def random_points():
    def make(rng, n, radius=10 ** 6):
        return [(rng.randint(-radius, radius), rng.randint(-radius, radius)) for _ in range(n)]
    return make


@pytest.fixture
def random_polygon(random_points):
    """Hull of n uniform points in a square; few vertices survive."""
    def make(rng, n, radius=10 ** 6):
        return scratch_hull(random_points(rng, n, radius))
    return make


@pytest.fixture
def circle_polygon():
    """Hull of n lattice points rounded from a circle; nearly all of them are vertices."""
    def make(n, radius=10 ** 8):
        return scratch_hull(
            (round(radius * math.cos(2 * math.pi * i / n)), round(radius * math.sin(2 * math.pi * i / n)))
            for i in range(n)
        )
    return make


@pytest.fixture
def disk_points():
    """Lattice points well inside a circle_polygon of the same radius."""
    def make(rng, n, radius=10 ** 8):
        inner = radius // 2
        out = []
        while len(out) < n:
            x, y = rng.randint(-inner, inner), rng.randint(-inner, inner)
            if x * x + y * y <= inner * inner:
                out.append((x, y))
        return out
    return make


@pytest.fixture
def polygon_halfplanes():
    """One halfplane per side of a CCW polygon, keyed by the side."""
    def make(vertices):
        halfplanes = []
        for s in hull_sides(vertices):
            a, b, c = s.coefficients()
            halfplanes.append(Halfplane(s.key, a, b, c))
        return halfplanes
    return make
