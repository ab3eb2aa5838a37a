"""Trajectory export: one CSV row per recorded step (t, pi_a, delta, phase)."""

from pathlib import Path

import polars as pl

from src.voting.state.schemas import Trajectory

TRACE_SCHEMA = {"t": pl.Int64, "pi_a": pl.Float64, "delta": pl.Float64, "phase": pl.Utf8}


def trajectory_frame(trajectory: Trajectory) -> pl.DataFrame:
    return pl.DataFrame(
        [p.model_dump() for p in trajectory.steps] or None,
        schema=TRACE_SCHEMA,
    )


def write_trace(trajectory: Trajectory, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    trajectory_frame(trajectory).write_csv(path)
    return path
