"""Summaries of per-sample defect tables and suite checks."""
from __future__ import annotations

from typing import Dict, Iterable, Sequence

import pandas as pd


def summarize_run(df: pd.DataFrame, columns: Sequence[str] | None = None) -> Dict[str, float]:
    """Worst and mean value of each numeric defect column."""
    numeric = df.select_dtypes("number")
    columns = [c for c in (columns or numeric.columns) if c != "sample"]
    summary: Dict[str, float] = {"samples": float(len(df))}
    for column in columns:
        summary[f"max_{column}"] = float(numeric[column].max())
        summary[f"mean_{column}"] = float(numeric[column].mean())
    return summary


def summarize_checks(checks: Iterable) -> pd.DataFrame:
    """Tidy table of checks, one row per check name."""
    rows = [
        {
            "check": c.name,
            "max_defect": c.max_defect,
            "tolerance": c.tolerance,
            "kind": c.kind,
            "passed": c.passed,
        }
        for c in checks
    ]
    if not rows:
        return pd.DataFrame(columns=["max_defect", "tolerance", "kind", "passed"]).rename_axis("check")
    return pd.DataFrame(rows).set_index("check")


def compare_groups(tables: Dict[str, pd.DataFrame]) -> pd.DataFrame:
    """Side-by-side summaries of the same suite run on several group models."""
    rows = []
    for name, df in tables.items():
        summary = summarize_run(df)
        summary["group"] = name
        rows.append(summary)
    return pd.DataFrame(rows).set_index("group")
