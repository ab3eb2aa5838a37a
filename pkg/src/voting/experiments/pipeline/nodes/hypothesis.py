"""Node 3: Hypothesis check: does the measured graph satisfy the plan's regime?

A violating cell is still simulated but flagged and left out of fits.
"""

from src.voting.experiments.plans import hypothesis_holds
from src.voting.state.schemas import CellState
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)


def hypothesis_node(state: CellState) -> CellState:
    plan = state["plan"]
    spectral = state["spectral"] or {}
    norms = state["pi_norms"] or {}
    ok = hypothesis_holds(
        plan.hypothesis, plan.init, state["n"], state["half_k"],
        spectral["lam"], norms["pi2"], norms["pi3"],
    )
    if not ok:
        logger.warning(
            "Cell violates plan hypothesis; flagged and excluded from fits",
            cell=state["cell_index"],
            hypothesis=plan.hypothesis.kind,
            lam=spectral["lam"],
            pi2=norms["pi2"],
            pi3=norms["pi3"],
        )
    return {**state, "hypothesis_ok": ok}
