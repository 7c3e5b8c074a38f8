"""Assembly of the JSON run report."""
from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Dict

import numpy as np
import pandas as pd

from src.suites.config import RunConfig
from src.suites.coordinator import SuiteResult

SCHEMA_VERSION = "1.0"


def to_plain(value):
    """Convert arrays, frames and dataclasses into JSON-ready values."""
    if isinstance(value, pd.DataFrame):
        return [to_plain(row) for row in value.to_dict(orient="records")]
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return {"real": np.real(value).tolist(), "imag": np.imag(value).tolist()}
        return value.tolist()
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, complex):
        return {"real": value.real, "imag": value.imag}
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    return value


def build_report(config: RunConfig, result: SuiteResult, event_log: pd.DataFrame) -> Dict[str, object]:
    return to_plain(
        {
            "schema_version": SCHEMA_VERSION,
            "command": config.command,
            "group": config.group_name,
            "pattern": config.pattern_path,
            "seed": config.seed,
            "n_samples": config.n_samples,
            "fd_step": config.fd_step,
            "tolerances": config.tolerances.as_dict(),
            "passed": result.passed,
            "checks": result.checks,
            "samples": result.samples,
            "event_log": event_log,
            "payload": result.payload,
        }
    )


def write_report(path: Path, report: Dict[str, object]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8")
