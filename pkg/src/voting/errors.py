"""Error hierarchy: every failure the toolkit raises on purpose."""

from typing import Any


class VotingError(Exception):
    """Base class; ``context`` carries structured fields for logging."""

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.context = context


class InvalidGraph(VotingError):
    """Graph violates an invariant (disconnected, isolated vertex, bad edge list)."""


class InvalidParam(VotingError):
    """Generator or operation parameter out of range."""


class InvalidSpec(VotingError):
    """Betrayal function is malformed (f(0) != 0, leaves [0, 1], bad table)."""


class RetryExhausted(VotingError):
    """Random generation kept failing within the retry budget."""

    def __init__(self, message: str, attempts: int, **context: Any) -> None:
        super().__init__(message, attempts=attempts, **context)
        self.attempts = attempts


class NoConvergence(VotingError):
    """Iterative eigen-solver hit ``max_iter``; the caller may raise it."""

    def __init__(self, message: str, max_iter: int, **context: Any) -> None:
        super().__init__(message, max_iter=max_iter, **context)
        self.max_iter = max_iter


class Disconnected(VotingError):
    """Second eigenvalue equals one within tolerance."""


class NotSmooth(VotingError):
    """Quantity needs a C^2 betrayal function."""


class Unclassifiable(VotingError):
    """Phase thresholds cannot be computed (no C^2 profile)."""


class InsufficientCells(VotingError):
    """Scaling fit needs at least three usable cells."""

    def __init__(self, message: str, count: int, **context: Any) -> None:
        super().__init__(message, count=count, **context)
        self.count = count


class NoPhaseIISteps(VotingError):
    """Drift audit found no transition inside the growth band."""
