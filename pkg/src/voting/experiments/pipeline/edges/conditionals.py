"""Conditional edges: Routing logic for cell decisions."""

from src.voting.state.schemas import CellState
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)


def abort_gate(state: CellState) -> str:
    """Route an aborted cell straight to its summary record.

    Returns:
        "continue" to go on with the cell, "abort" to summarize it as aborted
    """
    if state.get("aborted"):
        logger.warning(
            "Cell aborted, skipping to summary",
            cell=state.get("cell_index"),
            reason=state.get("abort_reason"),
        )
        return "abort"
    return "continue"
