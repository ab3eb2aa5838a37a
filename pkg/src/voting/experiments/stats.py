"""Per-cell statistics of the raw trial table.

The same function summarizes rows in the pipeline and re-summarizes a
written ``raw.csv``, so stored summaries can be recomputed exactly.
"""

import math
from pathlib import Path
from statistics import median_grouped
from typing import Any, Optional

import polars as pl

RAW_SCHEMA: dict[str, Any] = {
    "plan_id": pl.Utf8,
    "cell": pl.Int64,
    "trial": pl.Int64,
    "seed": pl.UInt64,
    "n": pl.Int64,
    "param": pl.Float64,
    "lambda": pl.Float64,
    "pi2": pl.Float64,
    "pi3": pl.Float64,
    "t_cons": pl.Int64,
    "terminal": pl.Utf8,
    "init": pl.Utf8,
    "k": pl.Int64,
}


def rows_frame(rows: list[dict[str, Any]]) -> pl.DataFrame:
    return pl.DataFrame(rows or None, schema=RAW_SCHEMA)


def whp_threshold(n: int) -> float:
    """Consensus rate standing in for "with high probability": 1 - 5 / sqrt(n)."""
    return 1.0 - 5.0 / math.sqrt(n)


def _opt(value: Any) -> Optional[float]:
    return None if value is None else float(value)


def cell_statistics(frame: pl.DataFrame) -> dict[str, Any]:
    """Consensus rate and t_cons quantiles of one cell's rows.

    With several init kinds the median is the largest per-init median.
    ``median_grouped`` interpolates within the unit step interval holding the
    median, so it moves continuously with the distribution of integer times.
    """
    trials = frame.height
    if trials == 0:
        return {"trials": 0, "consensus_rate": None, "median": None, "median_grouped": None,
                "p05": None, "p95": None, "mean": None, "init_medians": {}}

    done = frame.filter(pl.col("t_cons").is_not_null())
    times = done["t_cons"]
    inits = frame["init"].unique(maintain_order=True).to_list()
    per_init = {
        row["init"]: _opt(row["median"])
        for row in done.group_by("init", maintain_order=True)
        .agg(pl.col("t_cons").median().alias("median"))
        .iter_rows(named=True)
    }
    init_medians = {init: per_init.get(init) for init in inits}
    medians = [m for m in init_medians.values() if m is not None]
    grouped = [
        median_grouped(group["t_cons"].to_list())
        for _, group in done.group_by("init", maintain_order=True)
    ]

    return {
        "trials": trials,
        "consensus_rate": done.height / trials,
        "median": max(medians) if medians else None,
        "median_grouped": max(grouped) if grouped else None,
        "p05": _opt(times.quantile(0.05, interpolation="linear")) if done.height else None,
        "p95": _opt(times.quantile(0.95, interpolation="linear")) if done.height else None,
        "mean": _opt(times.mean()) if done.height else None,
        "init_medians": init_medians,
    }


def read_raw(path: str | Path) -> pl.DataFrame:
    return pl.read_csv(path, schema=RAW_SCHEMA)


def recompute_summary(raw_csv: str | Path) -> dict[int, dict[str, Any]]:
    """cell index -> statistics, recomputed from a written raw table."""
    frame = read_raw(raw_csv)
    return {
        int(cell): cell_statistics(frame.filter(pl.col("cell") == cell))
        for cell in frame["cell"].unique(maintain_order=True).to_list()
    }
