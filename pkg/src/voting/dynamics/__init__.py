"""Synchronous update engine, exact moments, phases and trajectories."""

from src.voting.dynamics.configuration import Configuration
from src.voting.dynamics.engine import (
    default_max_steps,
    empirical_next_sizes,
    exact_moments,
    run,
    step,
    step_batch,
)
from src.voting.dynamics.phases import GrowingKClassifier, PhaseClassifier, classify_phase
from src.voting.dynamics.streams import CounterStream
from src.voting.dynamics.trace import trajectory_frame, write_trace

__all__ = [
    "Configuration",
    "CounterStream",
    "GrowingKClassifier",
    "PhaseClassifier",
    "classify_phase",
    "default_max_steps",
    "empirical_next_sizes",
    "exact_moments",
    "run",
    "step",
    "step_batch",
    "trajectory_frame",
    "write_trace",
]
