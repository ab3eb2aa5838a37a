"""Logging: Machine-readable, human-friendly, always consistent."""

import logging
import sys
from typing import Any

import structlog


def configure_logging(log_level: str = "INFO", fmt: str = "json") -> None:
    """Call this once at application startup.

    Configures both standard library logging and structlog. Output goes to
    stderr so that command output on stdout stays parseable.
    """

    # Step 1: Configure standard library (captures logs from dependencies)
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, log_level.upper()),
        force=True,
    )

    renderer: Any = (
        structlog.dev.ConsoleRenderer(colors=False)
        if fmt == "console"
        else structlog.processors.JSONRenderer()
    )

    # Step 2: Configure structlog (application's structured logs)
    structlog.configure(
        processors=[
            # Filter by level first (performance)
            structlog.stdlib.filter_by_level,

            # Add metadata
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),

            # Formatting
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),

            # Output format (JSON for runs and CI, console for local work)
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def get_logger(name: str) -> Any:
    """Get a logger bound with the module name.

    Usage:
        logger = get_logger(__name__)
        logger.info("graph_generated", family="gnp", n=1024, seed=7)
    """
    return structlog.get_logger(name)


# Reproducibility: every run-level outcome is logged with the same shape
def log_run_event(
    logger: Any,
    event_type: str,
    graph_context: dict[str, Any] | None = None,
    spec_context: dict[str, Any] | None = None,
    seed: int | None = None,
    outcome: dict[str, Any] | None = None,
    **kwargs: Any,
) -> None:
    """Standardized logging for runs, checks and experiment cells.

    Accepts dictionaries produced by ``model_dump()`` of the schema models.
    """
    logger.info(
        event_type,
        graph_context=graph_context,
        spec_context=spec_context,
        seed=seed,
        outcome=outcome,
        run_event=True,
        **kwargs,
    )
