# Trace file reading and writing for planar_width.
# One operation per line: "I <id> <x> <y>" or "D <id>"; '#' starts a comment.

import logging
import re
from pathlib import Path
from typing import Iterable, List, TextIO, Union

from planar_width import config
from planar_width.errors import TraceParseError
from planar_width.geom_core import Point
from planar_width.width_engine import Delete, Insert, Op

logger = logging.getLogger(__name__)

# ASCII only; int() alone would also take other Unicode digits and underscores.
_UNSIGNED = re.compile(r"[0-9]+\Z")
_SIGNED = re.compile(r"[+-]?[0-9]+\Z")


def _parse_id(token: str, line_number: int) -> int:
    if not _UNSIGNED.match(token):
        raise TraceParseError(line_number, "id %r is not an unsigned decimal" % token)
    value = int(token)
    if value > config.MAX_POINT_ID:
        raise TraceParseError(line_number, "id %s exceeds 64 bits" % token)
    return value


def _parse_coord(token: str, line_number: int) -> int:
    if not _SIGNED.match(token):
        raise TraceParseError(line_number, "coordinate %r is not a decimal integer" % token)
    value = int(token)
    if abs(value) > config.COORD_BOUND:
        raise TraceParseError(line_number, "coordinate %s exceeds |coord| <= 2^30" % token)
    return value


def parse_line(line: str, line_number: int) -> Union[Op, None]:
    text = line.split("#", 1)[0].strip()
    if not text:
        return None
    tokens = text.split()
    kind = tokens[0]
    if kind == config.OP_INSERT:
        if len(tokens) != 4:
            raise TraceParseError(line_number, "insert needs 'I <id> <x> <y>'")
        point_id = _parse_id(tokens[1], line_number)
        return Insert(Point(point_id, _parse_coord(tokens[2], line_number), _parse_coord(tokens[3], line_number)))
    if kind == config.OP_DELETE:
        if len(tokens) != 2:
            raise TraceParseError(line_number, "delete needs 'D <id>'")
        return Delete(_parse_id(tokens[1], line_number))
    raise TraceParseError(line_number, "unknown operation %r" % kind)


def parse_trace(lines: Iterable[str]) -> List[Op]:
    ops = []
    for line_number, line in enumerate(lines, start=1):
        op = parse_line(line, line_number)
        if op is not None:
            ops.append(op)
    return ops


def _decoded_lines(raw: Iterable[bytes]) -> Iterable[str]:
    for line_number, line in enumerate(raw, start=1):
        try:
            yield line.decode("utf-8")
        except UnicodeDecodeError as e:
            raise TraceParseError(line_number, "not valid UTF-8 (%s)" % e.reason) from None


def read_trace(path: Union[str, Path]) -> List[Op]:
    with open(path, "rb") as f:
        ops = parse_trace(_decoded_lines(f))
    logger.info("Read %d operations from %s", len(ops), path)
    return ops


def format_op(op: Op) -> str:
    if isinstance(op, Insert):
        p = op.point
        return "%s %d %d %d" % (config.OP_INSERT, p.id, p.x, p.y)
    return "%s %d" % (config.OP_DELETE, op.id)


def format_trace(ops: Iterable[Op]) -> str:
    return "".join(format_op(op) + "\n" for op in ops)


def write_trace(ops: Iterable[Op], out: Union[str, Path, TextIO]) -> None:
    text = format_trace(ops)
    if hasattr(out, "write"):
        out.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
