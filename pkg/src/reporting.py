"""
Tables, CSV/JSON emission and run manifests.

CSV: UTF-8, comma-delimited, header row, LF line endings, floats written as
their shortest round-trip decimal. JSON: two-space indent, stable key order,
non-finite floats written as null.
"""

import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from src import __version__
from src.discrete_game import EnumerationSummary
from src.gaussian_model import (
    DEFAULT_QUADRATURE, GaussianParams, PayoffSpec, QuadratureConfig,
    expected_loss, expected_net_payoff, expected_return_ratio, expected_win,
)
from src.monte_carlo import SimulationResult
from src.utils import setup_logging

logger = setup_logging(__name__)


def to_jsonable(value):
    """Convert numpy scalars/arrays and non-finite floats for json.dumps."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, Path):
        return str(value)
    return value


def dumps_json(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, allow_nan=False) + "\n"


def write_json(obj, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_json(obj))
    logger.info(f"Saved {path}")
    return path


def write_csv(df: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    logger.info(f"Saved {len(df):,} rows to {path}")
    return path


def discrete_report(summary: EnumerationSummary) -> dict:
    """Machine-readable form of a coin-game enumeration."""
    config = summary.config
    return {
        "loan_coins": config.loan_coins,
        "competitor_coins": config.competitor_coins,
        "interest_coins": config.interest_coins,
        "total_pot": config.total_pot,
        "rows": [
            {
                "b_end": r.b_end,
                "c_end": r.c_end,
                "b_net": r.b_net,
                "a_win": r.a_win,
                "a_loss": r.a_loss,
                "a_recovered": r.a_recovered,
            }
            for r in summary.rows
        ],
        "total_b_net": summary.total_b_net,
        "total_win": summary.total_win,
        "total_loss": summary.total_loss,
        "net_total": summary.net_total,
        "expected_net": str(summary.expected_net),
        "expected_net_float": float(summary.expected_net),
    }


def analytic_report(spec: PayoffSpec, params: GaussianParams,
                    q: QuadratureConfig = DEFAULT_QUADRATURE,
                    requested_interest: float | None = None) -> dict:
    """
    Win, loss, ratio and net payoff for one (I, mu, sigma).

    `requested_interest` is the nominal rate before clamping to the upper
    bound; `interest` is the rate actually applied.
    """
    if requested_interest is None:
        requested_interest = spec.interest
    return {
        "mu": params.mu,
        "sigma": params.sigma,
        "requested_interest": float(requested_interest),
        "interest": spec.interest,
        "renormalize": spec.renormalize,
        "win_form": spec.win_form,
        "expected_win": expected_win(spec, params, q),
        "expected_loss": expected_loss(params, q, spec),
        "expected_return_ratio": expected_return_ratio(spec, params, q),
        "expected_net_payoff": expected_net_payoff(spec, params, q),
    }


def simulation_report(result: SimulationResult, mode: str, model: dict) -> dict:
    """SimulationResult plus the model configuration that produced it."""
    return {
        "mode": mode,
        "version": __version__,
        "model": model,
        "result": result.to_dict(),
    }


def print_fields(report: dict, title: str):
    """Labeled one-per-line rendering of a flat report."""
    print(title)
    print("-" * len(title))
    width = max(len(k) for k in report)
    for key, value in report.items():
        if isinstance(value, float):
            value = f"{value:.10g}"
        print(f"  {key:<{width}}  {value}")


@dataclass
class RunManifest:
    """Provenance record written next to generated artifacts."""

    command: str
    parameters: dict
    seeds: list[int] = field(default_factory=list)
    outputs: list[dict] = field(default_factory=list)
    version: str = __version__
    duration_seconds: float = 0.0
    _started: float = field(default_factory=time.perf_counter, repr=False)

    def add_output(self, path: Path, status: str = "ok", error: str | None = None):
        path = Path(path)
        entry = {
            "file": path.name,
            "status": status,
            "bytes": path.stat().st_size if path.exists() else 0,
        }
        if error:
            entry["error"] = error
        self.outputs.append(entry)

    def finish(self):
        self.duration_seconds = time.perf_counter() - self._started

    @property
    def succeeded(self) -> bool:
        return all(o["status"] == "ok" and o["bytes"] > 0 for o in self.outputs)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("_started")
        return d
