#!/usr/bin/env python3
# Command-line front end for planar_width: run, verify, gen and bench traces.

import argparse
import logging
import sys
from logging.handlers import BufferingHandler
from typing import List, Optional, Tuple

from planar_width import config
from planar_width.config import Settings, load_settings
from planar_width.trace import bench, generate, run, verify, write_trace
from planar_width.trace.bench import parse_sizes

logger = logging.getLogger("dynwidth")


def setup_logging(level: str, log_file: Optional[str]) -> None:
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=config.LOG_FORMAT,
                        filename=log_file)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynwidth", description="Exact dynamic width of a planar point set")
    parser.add_argument("--log-file", default=None, help="write logs to this file instead of stderr")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="replay a trace and write one CSV row per operation")
    p_run.add_argument("--trace", required=True)
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--no-timing", action="store_true", help="write time_ns as 0 for reproducible output")

    p_verify = sub.add_parser("verify", help="check the engine against rotating calipers after every operation")
    p_verify.add_argument("--trace", required=True)
    p_verify.add_argument("--fault-inject", action="store_true", help="perturb reported widths to test the harness")

    p_gen = sub.add_parser("gen", help="generate a seeded trace")
    p_gen.add_argument("--mode", required=True, choices=config.TRACE_MODES)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None, help="output file (default: stdout)")

    p_bench = sub.add_parser("bench", help="time generated traces over a range of sizes")
    p_bench.add_argument("--mode", required=True, choices=config.TRACE_MODES)
    p_bench.add_argument("--sizes", required=True, help="comma-separated ascending sizes")
    p_bench.add_argument("--repeats", type=int, default=1)
    p_bench.add_argument("--out", required=True)
    p_bench.add_argument("--workers", type=int, default=1)
    return parser


def load_settings_buffered() -> Tuple[Settings, List[logging.LogRecord]]:
    """Load settings before logging is configured, holding back what the loader logs."""
    buffer = BufferingHandler(capacity=1000)
    config_logger = logging.getLogger(config.__name__)
    config_logger.addHandler(buffer)
    config_logger.propagate = False
    try:
        settings = load_settings()
    finally:
        config_logger.removeHandler(buffer)
        config_logger.propagate = True
    return settings, list(buffer.buffer)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings, held = load_settings_buffered()
    setup_logging("DEBUG" if args.verbose else settings.log_level, args.log_file or settings.log_file)
    for record in held:
        logging.getLogger(record.name).handle(record)
    logger.debug("Settings: %s", settings)

    if args.command == "run":
        return run(args.trace, args.out, settings, timing=not args.no_timing)
    if args.command == "verify":
        return verify(args.trace, settings, fault_inject=args.fault_inject)
    if args.command == "gen":
        if args.n < 1:
            logger.error("--n must be at least 1")
            return config.EXIT_SEMANTIC
        ops = generate(args.mode, args.n, args.seed, settings)
        write_trace(ops, args.out if args.out else sys.stdout)
        return config.EXIT_OK
    if args.command == "bench":
        try:
            sizes = parse_sizes(args.sizes)
        except ValueError as e:
            logger.error("Invalid --sizes: %s", e)
            return config.EXIT_PARSE
        return bench(args.mode, sizes, args.repeats, args.out, settings, args.workers)
    return config.EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
