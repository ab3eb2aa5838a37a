"""Node 2: Spectrum: expansion parameter and pi norms of the cell graph."""

from src.voting.errors import Disconnected, NoConvergence
from src.voting.graph.spectral import expansion
from src.voting.state.schemas import CellState
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)


def spectrum_node(state: CellState) -> CellState:
    plan = state["plan"]
    graph = state["graph"]
    logger.info("--- MEASURING SPECTRUM ---", cell=state["cell_index"], n=graph.n)

    try:
        summary = expansion(graph, method=plan.spectral_method, seed=state["graph_seed"])
    except NoConvergence as exc:
        if plan.spectral_method == "lanczos":
            return {**state, "aborted": True, "abort_reason": str(exc)}
        logger.warning("spectral_fallback_lanczos", cell=state["cell_index"], **exc.context)
        summary = expansion(graph, method="lanczos")
    except Disconnected as exc:
        return {**state, "aborted": True, "abort_reason": str(exc)}

    dist = graph.distribution
    return {
        **state,
        "spectral": summary.model_dump(),
        "pi_norms": {"pi2": dist.norm2, "pi3": dist.norm3},
    }
