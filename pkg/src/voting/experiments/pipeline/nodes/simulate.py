"""Node 4: Simulation: independent consensus runs on the cell graph.

Trial i of cell c draws its initial set from default_rng(seed) and its
per-round uniforms from CounterStream(seed), with seed = derive_seed(master,
c, i), so any single trial can be replayed without the others.
"""

from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Any, Optional

import numpy as np

from src.voting.dynamics.engine import run
from src.voting.dynamics.init import ADVERSARIAL_PROXIES, build_init
from src.voting.dynamics.phases import GrowingKClassifier, PhaseClassifier, PhaseModel
from src.voting.dynamics.streams import CounterStream
from src.voting.errors import NotSmooth, Unclassifiable
from src.voting.experiments.plans import cell_voting, max_steps_for, trial_seed
from src.voting.graph.core import Graph
from src.voting.kernels.profile import derive_profile
from src.voting.state.schemas import (
    CellState,
    ExperimentPlan,
    SpectralSummary,
    Trajectory,
)
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)


def init_labels(plan: ExperimentPlan) -> list[Optional[str]]:
    """One entry per run of a trial: the three proxies, or the plan's own rule."""
    if plan.init.kind == "adversarial":
        return list(ADVERSARIAL_PROXIES)
    return [None]


def cell_classifier(
    plan: ExperimentPlan,
    graph: Graph,
    half_k: Optional[int],
    spectral: SpectralSummary,
) -> Optional[PhaseModel]:
    """Phase labeller for recorded trajectories; None when the model does not apply."""
    if plan.phase_model == "growing_k":
        return GrowingKClassifier.for_order(half_k or 1, graph.n)
    try:
        profile = derive_profile(cell_voting(plan, half_k))
        return PhaseClassifier.from_profile(profile, spectral, graph.distribution.norm2, graph.n)
    except (NotSmooth, Unclassifiable) as exc:
        logger.info("phase_labels_unavailable", reason=str(exc))
        return None


def simulate_trial(
    trial: int,
    *,
    plan: ExperimentPlan,
    cell: int,
    graph: Graph,
    half_k: Optional[int],
    classifier: Optional[PhaseModel],
    proxy: Optional[str] = None,
    record: bool = False,
) -> Trajectory:
    """One run; a module-level function so worker processes can unpickle it."""
    seed = trial_seed(plan, cell, trial)
    init = build_init(graph, plan.init, np.random.default_rng(seed), proxy=proxy)
    return run(
        graph,
        cell_voting(plan, half_k),
        init,
        max_steps=max_steps_for(plan, graph.n),
        rng=CounterStream(seed),
        classifier=classifier,
        record=record,
    )


def _row(
    state: CellState, trial: int, seed: int, label: str, trajectory: Trajectory
) -> dict[str, Any]:
    spectral = state["spectral"] or {}
    norms = state["pi_norms"] or {}
    return {
        "plan_id": state["plan"].plan_id,
        "cell": state["cell_index"],
        "trial": trial,
        "seed": seed,
        "n": state["n"],
        "param": state["param"],
        "lambda": spectral.get("lam"),
        "pi2": norms.get("pi2"),
        "pi3": norms.get("pi3"),
        "t_cons": trajectory.t_cons,
        "terminal": trajectory.terminal,
        "init": label,
        "k": state["half_k"],
    }


def simulate_node(state: CellState) -> CellState:
    plan = state["plan"]
    graph: Graph = state["graph"]
    cell = state["cell_index"]
    workers = max(1, state["workers"])
    logger.info("--- SIMULATING CELL ---", cell=cell, trials=plan.trials, workers=workers)

    spectral = SpectralSummary.model_validate(state["spectral"])
    classifier = None
    if plan.keep_trajectories:
        classifier = cell_classifier(plan, graph, state["half_k"], spectral)
    trials = list(range(plan.trials))

    rows: list[dict[str, Any]] = []
    kept: list[Trajectory] = []
    try:
        for proxy in init_labels(plan):
            work = partial(
                simulate_trial,
                plan=plan,
                cell=cell,
                graph=graph,
                half_k=state["half_k"],
                classifier=classifier,
                proxy=proxy,
                record=plan.keep_trajectories,
            )
            if workers > 1 and len(trials) > 1:
                with ProcessPoolExecutor(max_workers=workers) as pool:
                    chunk = max(1, len(trials) // (4 * workers))
                    results = list(pool.map(work, trials, chunksize=chunk))
            else:
                results = [work(i) for i in trials]

            label = proxy or plan.init.kind
            for i, trajectory in zip(trials, results):
                rows.append(_row(state, i, trajectory.seed, label, trajectory))
            if plan.keep_trajectories:
                kept.extend(results)
    except Exception as e:
        logger.error("Simulation failed", cell=cell, error=str(e))
        raise

    return {**state, "rows": rows, "trajectories": kept}
