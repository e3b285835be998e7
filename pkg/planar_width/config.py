# Central constants and tunables for planar_width: coordinate contract, CLI exit
# codes, CSV column names, and the settings.yaml loader. Import these instead of
# hardcoding values so the engine, the trace runner and the bench agree.

import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

import yaml

logger = logging.getLogger(__name__)

SETTINGS_YAML_PATH = Path(__file__).resolve().parent / "settings.yaml"
ENV_ALPHA = "DYNWIDTH_ALPHA"

# Input contract
COORD_BOUND = 2 ** 30
MAX_POINT_ID = 2 ** 64 - 1

# Exit codes
EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SEMANTIC = 3
EXIT_MISMATCH = 4

# Trace mnemonics
OP_INSERT = "I"
OP_DELETE = "D"
TRACE_MODES = ("incremental", "decremental", "mixed", "churn")

# Per-op CSV columns (run)
COL_OP_INDEX = "op_index"
COL_OP_KIND = "op_kind"
COL_WIDTH_SQ_NUM = "width_sq_num"
COL_WIDTH_SQ_DEN = "width_sq_den"
COL_WIDTH_FLOAT = "width_float"
COL_K = "k"
COL_CORNERS_ADDED = "corners_added"
COL_CORNERS_REMOVED = "corners_removed"
COL_SIDES_ADDED = "sides_added"
COL_SIDES_REMOVED = "sides_removed"
COL_TIME_NS = "time_ns"

RUN_COLUMNS = [
    COL_OP_INDEX,
    COL_OP_KIND,
    COL_WIDTH_SQ_NUM,
    COL_WIDTH_SQ_DEN,
    COL_WIDTH_FLOAT,
    COL_K,
    COL_CORNERS_ADDED,
    COL_CORNERS_REMOVED,
    COL_SIDES_ADDED,
    COL_SIDES_REMOVED,
    COL_TIME_NS,
]

# Bench CSV columns
COL_MODE = "mode"
COL_N = "n"
COL_REPEAT = "repeat"
COL_MEASURED_OPS = "measured_ops"
COL_TOTAL_NS = "total_ns"
COL_AMORTIZED_NS = "amortized_ns"
COL_SUM_K = "sum_k"
COL_MEAN_K = "mean_k"
COL_K_BOUND_OK = "sum_k_le_10n"
COL_MAX_SIDES_ADDED = "max_sides_added"
COL_MAX_CORNERS_ADDED = "max_corners_added"
COL_MAX_SIDES_REMOVED = "max_sides_removed"
COL_MAX_CORNERS_REMOVED = "max_corners_removed"
COL_BASELINE_NS = "baseline_total_ns"
COL_BASELINE_ESTIMATED = "baseline_estimated"
COL_SPEEDUP = "speedup"
COL_SLOPE = "loglog_slope"

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    alpha: float = 0.25
    envelope_small_block: int = 32
    envelope_rebuild_fraction: float = 0.5
    disk_radius: int = 1_000_000
    churn_apex_height_factor: int = 8
    bench_baseline_samples: int = 64
    log_level: str = "INFO"
    log_file: Optional[str] = None


def _load_settings_yaml(path: Path) -> Dict[str, Any]:
    """Load settings.yaml; return an empty dict when missing or malformed."""
    if not path.is_file():
        logger.warning("settings.yaml not found at %s, using defaults", path)
        return {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (yaml.YAMLError, OSError) as e:
        logger.warning("Could not load %s: %s", path, e)
        return {}
    if data is None:
        return {}
    if not isinstance(data, dict):
        logger.warning("Unexpected settings format in %s: expected mapping", path)
        return {}
    return data


def _valid_alpha(value: float) -> bool:
    return 0.0 < value <= 1.0 / 3.0


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return _is_int(value) or isinstance(value, float)


# setting -> (check, what the check expects)
_CHECKS: Dict[str, Tuple[Callable[[Any], bool], str]] = {
    "alpha": (lambda v: _is_number(v) and _valid_alpha(v), "a number in (0, 1/3]"),
    "envelope_small_block": (lambda v: _is_int(v) and v >= 1, "an integer >= 1"),
    "envelope_rebuild_fraction": (lambda v: _is_number(v) and 0.0 < v <= 1.0, "a number in (0, 1]"),
    "disk_radius": (lambda v: _is_int(v) and 1 <= v <= COORD_BOUND, "an integer in [1, 2^30]"),
    "churn_apex_height_factor": (lambda v: _is_int(v) and v >= 1, "an integer >= 1"),
    "bench_baseline_samples": (lambda v: _is_int(v) and v >= 1, "an integer >= 1"),
    "log_level": (lambda v: isinstance(v, str) and v.upper() in LOG_LEVELS, "one of " + ", ".join(LOG_LEVELS)),
    "log_file": (lambda v: v is None or (isinstance(v, str) and bool(v)), "a file name or null"),
}


def load_settings(path: Optional[Path] = None, environ: Optional[Dict[str, str]] = None) -> Settings:
    environ = os.environ if environ is None else environ
    raw = _load_settings_yaml(Path(path) if path else SETTINGS_YAML_PATH)
    defaults = Settings()
    values = {}
    for key, value in raw.items():
        if key not in _CHECKS:
            logger.warning("Ignoring unknown setting '%s'", key)
            continue
        check, expected = _CHECKS[key]
        if not check(value):
            logger.warning("%s=%r is not %s, using %r", key, value, expected, getattr(defaults, key))
            continue
        values[key] = value
    if "log_level" in values:
        values["log_level"] = values["log_level"].upper()
    settings = replace(defaults, **values)
    override = environ.get(ENV_ALPHA)
    if override:
        try:
            alpha = float(override)
        except ValueError:
            logger.warning("%s=%r is not a number, ignoring", ENV_ALPHA, override)
        else:
            if _valid_alpha(alpha):
                settings = replace(settings, alpha=alpha)
            else:
                logger.warning("%s=%s outside (0, 1/3], ignoring", ENV_ALPHA, alpha)
    return settings
