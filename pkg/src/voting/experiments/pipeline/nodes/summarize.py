"""Node 5: Summary: per-cell statistics, including aborted cells."""

from src.voting.experiments.stats import cell_statistics, rows_frame, whp_threshold
from src.voting.state.schemas import CellState, CellSummary
from src.voting.utils.logging_config import get_logger, log_run_event

logger = get_logger(__name__)


def summarize_node(state: CellState) -> CellState:
    plan = state["plan"]
    n = state["n"]
    logger.info("--- SUMMARIZING CELL ---", cell=state["cell_index"], aborted=state["aborted"])

    spectral = state["spectral"] or {}
    norms = state["pi_norms"] or {}
    statistics = cell_statistics(rows_frame(state["rows"]))
    threshold = whp_threshold(n)
    rate = statistics["consensus_rate"]

    summary = CellSummary(
        plan_id=plan.plan_id,
        cell=state["cell_index"],
        n=n,
        half_k=state["half_k"],
        param=state["param"],
        graph_seed=state["graph_seed"],
        lam=spectral.get("lam"),
        pi2=norms.get("pi2"),
        pi3=norms.get("pi3"),
        whp_threshold=threshold,
        whp_met=None if rate is None else rate >= threshold,
        hypothesis_ok=state["hypothesis_ok"],
        aborted=state["aborted"],
        abort_reason=state["abort_reason"],
        **statistics,
    )

    log_run_event(
        logger,
        "experiment_cell_finished",
        graph_context={"family": plan.family, "n": n, "param": state["param"]},
        spec_context={"spec": plan.voting.label, "half_k": state["half_k"]},
        seed=state["graph_seed"],
        outcome={
            "trials": summary.trials,
            "consensus_rate": rate,
            "median": summary.median,
            "whp_met": summary.whp_met,
            "aborted": summary.aborted,
        },
    )
    return {**state, "summary": summary}
