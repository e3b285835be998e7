# Trace replay for planar_width: "run" writes one CSV row per operation and
# "verify" checks the engine against the rotating-calipers oracle after every op.

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import pandas as pd
from filelock import FileLock, Timeout

from planar_width import config
from planar_width.config import Settings
from planar_width.errors import DynWidthError, TraceParseError
from planar_width.geom_core import SquaredDistance, Vertex
from planar_width.oracle import calipers_width
from planar_width.trace.trace_io import read_trace
from planar_width.width_engine import Delete, Insert, Op, WidthEngine, WidthReport

logger = logging.getLogger(__name__)

LOCK_TIMEOUT = 10


def report_row(index: int, op: Op, report: WidthReport, timing: bool = True) -> Dict[str, object]:
    num, den = report.width_sq.reduced()
    diff = report.diff
    return {
        config.COL_OP_INDEX: index,
        config.COL_OP_KIND: config.OP_INSERT if isinstance(op, Insert) else config.OP_DELETE,
        config.COL_WIDTH_SQ_NUM: num,
        config.COL_WIDTH_SQ_DEN: den,
        config.COL_WIDTH_FLOAT: report.width,
        config.COL_K: report.k,
        config.COL_CORNERS_ADDED: len(diff.corners_added),
        config.COL_CORNERS_REMOVED: len(diff.corners_removed),
        config.COL_SIDES_ADDED: len(diff.sides_added),
        config.COL_SIDES_REMOVED: len(diff.sides_removed),
        config.COL_TIME_NS: report.timing_ns if timing else 0,
    }


def run_ops(ops: Sequence[Op], engine: Optional[WidthEngine] = None, timing: bool = True) -> pd.DataFrame:
    engine = engine or WidthEngine()
    rows = [report_row(i, op, engine.apply(op), timing) for i, op in enumerate(ops)]
    return pd.DataFrame(rows, columns=config.RUN_COLUMNS)


def write_csv(frame: pd.DataFrame, out_path: Union[str, Path]) -> None:
    lock = FileLock(f"{out_path}.lock", timeout=LOCK_TIMEOUT)
    try:
        with lock:
            frame.to_csv(out_path, index=False, lineterminator="\n")
    except Timeout:
        logger.error("Output %s is locked by another process", out_path)
        raise


def run(trace_path: Union[str, Path], out_path: Union[str, Path], settings: Optional[Settings] = None,
        timing: bool = True) -> int:
    try:
        ops = read_trace(trace_path)
        frame = run_ops(ops, WidthEngine(settings), timing)
    except (TraceParseError, OSError) as e:
        logger.error("Parse error in %s: %s", trace_path, e)
        return config.EXIT_PARSE
    except DynWidthError as e:
        logger.error("Semantic error in %s: %s", trace_path, e)
        return config.EXIT_SEMANTIC
    write_csv(frame, out_path)
    logger.info("Wrote %d rows to %s", len(frame), out_path)
    return config.EXIT_OK


@dataclass(frozen=True)
class Mismatch:
    op_index: int
    engine: SquaredDistance
    oracle: SquaredDistance

    def describe(self) -> str:
        return "op %d: engine width_sq %d/%d, oracle width_sq %d/%d" % (
            (self.op_index,) + self.engine.reduced() + self.oracle.reduced()
        )


def verify_ops(ops: Sequence[Op], engine: WidthEngine) -> Optional[Mismatch]:
    """Replay ops and return the first disagreement with the oracle, or None."""
    live: Dict[int, Vertex] = {}
    for index, op in enumerate(ops):
        report = engine.apply(op)
        if isinstance(op, Insert):
            live[op.point.id] = op.point.coords
        elif isinstance(op, Delete):
            del live[op.id]
        expected = calipers_width(live.values()).width_sq
        if report.width_sq != expected:
            return Mismatch(index, report.width_sq, expected)
    return None


def verify(trace_path: Union[str, Path], settings: Optional[Settings] = None, fault_inject: bool = False) -> int:
    try:
        ops = read_trace(trace_path)
        mismatch = verify_ops(ops, WidthEngine(settings, fault_inject=fault_inject))
    except (TraceParseError, OSError) as e:
        logger.error("Parse error in %s: %s", trace_path, e)
        return config.EXIT_PARSE
    except DynWidthError as e:
        logger.error("Semantic error in %s: %s", trace_path, e)
        return config.EXIT_SEMANTIC
    if mismatch is not None:
        logger.error("Mismatch at %s", mismatch.describe())
        print("MISMATCH %s" % mismatch.describe())
        return config.EXIT_MISMATCH
    logger.info("Verified %d operations against the calipers oracle", len(ops))
    print("OK %d operations" % len(ops))
    return config.EXIT_OK
