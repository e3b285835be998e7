"""
Seeded workload generators. Every trace is a pure function of (mode, n, seed):

- incremental: n insertions uniform in a disk of radius R
- decremental: the same n insertions, then every point deleted in random order
- mixed: n operations, inserting with probability 2/3 (always when nothing is
  live) and otherwise deleting a uniformly random live point
- churn: n points on a shallow arc plus one apex far above it, toggled n times;
  each toggle replaces every compatible pair that involves the apex
"""

import logging
import math
from typing import List, Optional

import numpy as np

from planar_width import config
from planar_width.config import Settings
from planar_width.geom_core import Point
from planar_width.width_engine import Delete, Insert, Op

logger = logging.getLogger(__name__)

INSERT_PROBABILITY = 2.0 / 3.0
CHURN_ARC_HALF_ANGLE = math.radians(30.0)
CHURN_APEX_JITTER = 7


def _disk_points(rng: np.random.Generator, n: int, radius: int) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    return np.column_stack((np.rint(r * np.cos(theta)), np.rint(r * np.sin(theta)))).astype(np.int64)


def incremental(n: int, seed: int, radius: int) -> List[Op]:
    rng = np.random.default_rng(seed)
    pts = _disk_points(rng, n, radius)
    return [Insert(Point(i, int(x), int(y))) for i, (x, y) in enumerate(pts)]


def decremental(n: int, seed: int, radius: int) -> List[Op]:
    rng = np.random.default_rng(seed)
    pts = _disk_points(rng, n, radius)
    ops: List[Op] = [Insert(Point(i, int(x), int(y))) for i, (x, y) in enumerate(pts)]
    ops.extend(Delete(int(i)) for i in rng.permutation(n))
    return ops


def mixed(n: int, seed: int, radius: int) -> List[Op]:
    rng = np.random.default_rng(seed)
    ops: List[Op] = []
    live: List[int] = []
    next_id = 0
    for _ in range(n):
        if not live or rng.random() < INSERT_PROBABILITY:
            x, y = _disk_points(rng, 1, radius)[0]
            ops.append(Insert(Point(next_id, int(x), int(y))))
            live.append(next_id)
            next_id += 1
        else:
            slot = int(rng.integers(len(live)))
            live[slot], live[-1] = live[-1], live[slot]
            ops.append(Delete(live.pop()))
    return ops


def churn(n: int, seed: int, radius: int, apex_factor: int) -> List[Op]:
    rng = np.random.default_rng(seed)
    theta = -math.pi / 2 + rng.uniform(-CHURN_ARC_HALF_ANGLE, CHURN_ARC_HALF_ANGLE, n)
    xs = np.rint(radius * np.cos(theta)).astype(np.int64)
    ys = np.rint(radius * np.sin(theta)).astype(np.int64)
    ops: List[Op] = [Insert(Point(i, int(x), int(y))) for i, (x, y) in enumerate(zip(xs, ys))]
    apex_y = apex_factor * radius
    apex_id = n
    for i in range(n):
        if i % 2 == 0:
            ops.append(Insert(Point(apex_id, 0, apex_y + 1 + (i // 2) % CHURN_APEX_JITTER)))
        else:
            ops.append(Delete(apex_id))
            apex_id += 1
    return ops


def generate(mode: str, n: int, seed: int, settings: Optional[Settings] = None) -> List[Op]:
    if n < 1:
        raise ValueError("n must be at least 1")
    settings = settings or Settings()
    radius = settings.disk_radius
    if mode == "incremental":
        ops = incremental(n, seed, radius)
    elif mode == "decremental":
        ops = decremental(n, seed, radius)
    elif mode == "mixed":
        ops = mixed(n, seed, radius)
    elif mode == "churn":
        ops = churn(n, seed, radius, settings.churn_apex_height_factor)
    else:
        raise ValueError("unknown mode %r, expected one of %s" % (mode, ", ".join(config.TRACE_MODES)))
    logger.debug("Generated %d %s operations (n=%d, seed=%d)", len(ops), mode, n, seed)
    return ops


def measured_from(mode: str, n: int) -> int:
    """Index of the first operation that belongs to the measured workload."""
    return n if mode in ("decremental", "churn") else 0
