"""Synchronous functional voting on expander graphs: simulation and exact checks."""

__version__ = "1.0.0"
