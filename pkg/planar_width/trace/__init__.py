from planar_width.trace.bench import bench, run_bench
from planar_width.trace.generators import generate
from planar_width.trace.runner import run, run_ops, verify, verify_ops
from planar_width.trace.trace_io import format_trace, parse_trace, read_trace, write_trace

__all__ = [
    "bench",
    "format_trace",
    "generate",
    "parse_trace",
    "read_trace",
    "run",
    "run_bench",
    "run_ops",
    "verify",
    "verify_ops",
    "write_trace",
]
