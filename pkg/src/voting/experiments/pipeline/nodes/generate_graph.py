"""Node 1: Graph generation: samples the cell's graph from its derived seed."""

from config.settings import settings
from src.voting.errors import InvalidParam, RetryExhausted
from src.voting.experiments.plans import cell_param
from src.voting.graph.generators import GeneratorSpec, generate
from src.voting.state.schemas import CellState
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)


def generate_graph_node(state: CellState) -> CellState:
    """Generate the cell graph; a failed generation aborts the cell with a record."""
    plan = state["plan"]
    n, half_k = state["n"], state["half_k"]
    param = cell_param(plan, n, half_k)
    logger.info("--- GENERATING CELL GRAPH ---", cell=state["cell_index"], n=n, param=param)

    spec = GeneratorSpec(
        family=plan.family,
        n=n,
        param=param,
        seed=state["graph_seed"],
        retry_budget=plan.retry_budget or settings.retry_budget,
    )
    try:
        graph = generate(spec)
    except (RetryExhausted, InvalidParam) as exc:
        logger.warning("cell_aborted", cell=state["cell_index"], reason=str(exc), **exc.context)
        return {**state, "param": param, "aborted": True, "abort_reason": str(exc)}

    return {**state, "param": param, "graph": graph}
