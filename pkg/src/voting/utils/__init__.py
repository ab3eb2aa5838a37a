"""Utility exports."""

from .logging_config import configure_logging, get_logger, log_run_event

__all__ = ["configure_logging", "get_logger", "log_run_event"]
