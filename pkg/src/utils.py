"""
Shared utilities for the zero-sum lending model.

Paths, logging, environment configuration, rate/range parsing and the
exception hierarchy used by every module.
"""

import logging
import os
from pathlib import Path

import numpy as np

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent

# Output directories
OUTPUT_DIR = Path(os.environ.get("ZSL_OUTPUT_DIR", PROJECT_ROOT / "output"))
OUTPUT_TABLES = OUTPUT_DIR / "tables"
OUTPUT_ARTIFACTS = OUTPUT_DIR / "artifacts"

# Model defaults
DEFAULT_SIGMA = 0.25
DEFAULT_MU = 0.0
DEFAULT_INTEREST = 0.2
DEFAULT_LOAN_COINS = 5
DEFAULT_COMPETITOR_COINS = 5
DEFAULT_SEED = 20180101
DEFAULT_ROUNDS = 1_000_000
DEFAULT_WORKERS = 1

# Surface ranges: mu 0 to 10%, I 1% to 160%
DEFAULT_MU_RANGE = "0:0.10:0.01"
DEFAULT_INTEREST_RANGE = "0.01:1.60:0.01"

# CLI exit codes
EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_NO_BREAKEVEN = 4
EXIT_IO = 5
EXIT_SAMPLING = 6


class LendingModelError(Exception):
    """Base class for model errors."""


class DomainError(LendingModelError, ValueError):
    """Parameter or argument outside its valid domain."""


class NumericalError(LendingModelError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, estimate: float = float("nan"),
                 error_bound: float = float("nan"), cell: tuple | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound
        self.cell = cell


class DegenerateRegimeError(NumericalError):
    """Expected loss vanishes, so the win/loss ratio is undefined."""


class NoBreakEvenError(LendingModelError):
    """The return ratio never reaches zero on the search interval."""


class RejectionBudgetError(LendingModelError):
    """Truncated sampling would need too many rejections."""


def setup_logging(name: str, level: int = logging.INFO) -> logging.Logger:
    """Set up a logger with console output."""
    logger = logging.getLogger(name)
    logger.setLevel(level)

    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setLevel(logging.DEBUG)
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    return logger


def set_log_level(level: int | str):
    """Apply a level to every logger created under the src package."""
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    for name in list(logging.root.manager.loggerDict):
        if name == "src" or name.startswith("src.") or name == "__main__":
            logging.getLogger(name).setLevel(level)


def ensure_dirs(*extra: Path):
    """Ensure output directories exist."""
    for dir_path in [OUTPUT_TABLES, OUTPUT_ARTIFACTS, *extra]:
        Path(dir_path).mkdir(parents=True, exist_ok=True)


def env_setting(name: str, default, cast=str):
    """Read ZSL_<name> from the environment, falling back to default."""
    raw = os.environ.get(f"ZSL_{name.upper()}")
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw)
    except ValueError as e:
        raise DomainError(f"Invalid ZSL_{name.upper()}={raw!r}: {e}") from e


def parse_rate(text: str | float) -> float:
    """
    Parse a rate given as a fraction ("0.2") or a percentage ("20%").

    Returns:
        The rate as a fraction.
    """
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip()
    try:
        if s.endswith("%"):
            return float(s[:-1]) / 100.0
        return float(s)
    except ValueError:
        raise DomainError(f"Cannot parse rate {text!r}") from None


def parse_range(text: str) -> list[float]:
    """
    Parse "start:stop:step" into an ascending list including stop.

    Each part may be a fraction or a percentage. Values are rounded to 12
    decimals so that e.g. 0:0.10:0.01 yields exactly 0.01, 0.02, ...
    """
    parts = str(text).split(":")
    if len(parts) == 1:
        return [parse_rate(parts[0])]
    if len(parts) != 3:
        raise DomainError(f"Range {text!r} must be start:stop:step")

    start, stop, step = (parse_rate(p) for p in parts)
    if stop < start:
        raise DomainError(f"Range {text!r} is empty (stop < start)")
    if start == stop:
        return [start]
    if step <= 0:
        raise DomainError(f"Range {text!r} needs a positive step")

    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    values = np.round(start + step * np.arange(count), 12)
    return [float(v) for v in values]
