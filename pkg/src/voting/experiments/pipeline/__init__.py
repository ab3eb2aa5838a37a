"""Experiment-cell pipeline: generate, measure, gate, simulate, summarize."""
