"""
Benchmark harness: replays generated traces of growing size, records amortized
update time and feature-change totals, times a recompute-per-update baseline
and fits the log-log slope of amortized time against n.
"""

import logging
import math
import time
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from planar_width import config
from planar_width.config import Settings
from planar_width.errors import DynWidthError
from planar_width.geom_core import Vertex
from planar_width.oracle import calipers_width
from planar_width.trace.generators import generate, measured_from
from planar_width.trace.runner import write_csv
from planar_width.width_engine import EngineStats, Insert, Op, WidthEngine

logger = logging.getLogger(__name__)

BENCH_COLUMNS = [
    config.COL_MODE,
    config.COL_N,
    config.COL_REPEAT,
    config.COL_MEASURED_OPS,
    config.COL_TOTAL_NS,
    config.COL_AMORTIZED_NS,
    config.COL_SUM_K,
    config.COL_MEAN_K,
    config.COL_K_BOUND_OK,
    config.COL_MAX_SIDES_ADDED,
    config.COL_MAX_CORNERS_ADDED,
    config.COL_MAX_SIDES_REMOVED,
    config.COL_MAX_CORNERS_REMOVED,
    config.COL_BASELINE_NS,
    config.COL_BASELINE_ESTIMATED,
    config.COL_SPEEDUP,
    config.COL_SLOPE,
]

K_BOUND_FACTOR = 10


def bench_seed(n: int, repeat: int) -> int:
    return n * 1000 + repeat


def _apply_live(live: Dict[int, Vertex], op: Op) -> None:
    if isinstance(op, Insert):
        live[op.point.id] = op.point.coords
    else:
        del live[op.id]


def baseline_ns(ops: Sequence[Op], start: int, samples: int) -> Tuple[int, bool]:
    """Time a full calipers recompute after each measured op, sampling when there are many."""
    measured = len(ops) - start
    if measured <= 0:
        return 0, False
    estimated = measured > samples
    picks = set(np.linspace(start, len(ops) - 1, samples, dtype=np.int64).tolist()) if estimated else None
    live: Dict[int, Vertex] = {}
    total = 0
    timed = 0
    for index, op in enumerate(ops):
        _apply_live(live, op)
        if index < start or (picks is not None and index not in picks):
            continue
        t0 = time.perf_counter_ns()
        calipers_width(live.values())
        total += time.perf_counter_ns() - t0
        timed += 1
    if estimated:
        total = int(total / timed * measured)
    return total, estimated


def bench_one(task: Tuple[str, int, int, Settings]) -> Dict[str, object]:
    mode, n, repeat, settings = task
    ops = generate(mode, n, bench_seed(n, repeat), settings)
    start = measured_from(mode, n)
    engine = WidthEngine(settings)
    for op in ops[:start]:
        engine.apply(op)
    engine.stats = EngineStats()
    t0 = time.perf_counter_ns()
    for op in ops[start:]:
        engine.apply(op)
    total = time.perf_counter_ns() - t0
    measured = len(ops) - start
    sum_k = engine.stats.sum_k
    base, estimated = baseline_ns(ops, start, settings.bench_baseline_samples)
    logger.info("bench %s n=%d repeat=%d: %d ops in %.3f s", mode, n, repeat, measured, total / 1e9)
    return {
        config.COL_MODE: mode,
        config.COL_N: n,
        config.COL_REPEAT: repeat,
        config.COL_MEASURED_OPS: measured,
        config.COL_TOTAL_NS: total,
        config.COL_AMORTIZED_NS: total / max(measured, 1),
        config.COL_SUM_K: sum_k,
        config.COL_MEAN_K: sum_k / max(measured, 1),
        config.COL_K_BOUND_OK: sum_k <= K_BOUND_FACTOR * n,
        config.COL_MAX_SIDES_ADDED: engine.stats.max_sides_added,
        config.COL_MAX_CORNERS_ADDED: engine.stats.max_corners_added,
        config.COL_MAX_SIDES_REMOVED: engine.stats.max_sides_removed,
        config.COL_MAX_CORNERS_REMOVED: engine.stats.max_corners_removed,
        config.COL_BASELINE_NS: base,
        config.COL_BASELINE_ESTIMATED: estimated,
        config.COL_SPEEDUP: base / total if total else math.nan,
    }


def loglog_slope(frame: pd.DataFrame) -> float:
    means = frame.groupby(config.COL_N)[config.COL_AMORTIZED_NS].mean()
    means = means[means > 0]
    if len(means) < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(means.index.to_numpy(dtype=float)), np.log(means.to_numpy()), 1)
    return float(slope)


def run_bench(mode: str, sizes: Sequence[int], repeats: int, settings: Optional[Settings] = None,
              workers: int = 1) -> pd.DataFrame:
    settings = settings or Settings()
    tasks = [(mode, n, r, settings) for n in sizes for r in range(repeats)]
    if workers > 1:
        with Pool(workers) as pool:
            rows = pool.map(bench_one, tasks)
    else:
        rows = [bench_one(task) for task in tasks]
    frame = pd.DataFrame(rows, columns=BENCH_COLUMNS)
    frame[config.COL_SLOPE] = loglog_slope(frame)
    return frame


def parse_sizes(text: str) -> List[int]:
    sizes = [int(part) for part in text.split(",") if part.strip()]
    if not sizes or any(n < 1 for n in sizes):
        raise ValueError("sizes must be positive integers")
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")
    return sizes


def bench(mode: str, sizes: Sequence[int], repeats: int, out_path: Union[str, Path],
          settings: Optional[Settings] = None, workers: int = 1) -> int:
    try:
        frame = run_bench(mode, sizes, repeats, settings, workers)
    except DynWidthError as e:
        logger.error("Semantic error during bench: %s", e)
        return config.EXIT_SEMANTIC
    write_csv(frame, out_path)
    slope = frame[config.COL_SLOPE].iloc[0] if len(frame) else math.nan
    logger.info("Wrote %d bench rows to %s (log-log slope %.3f)", len(frame), out_path, slope)
    return config.EXIT_OK
