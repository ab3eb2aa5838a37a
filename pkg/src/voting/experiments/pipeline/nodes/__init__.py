"""Cell pipeline nodes."""
