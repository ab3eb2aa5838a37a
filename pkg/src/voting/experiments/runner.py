"""Plan runner: every cell through the cell pipeline, then tables and fits."""

import json
from pathlib import Path
from typing import Optional

from config.settings import settings
from src.voting.dynamics.init import ADVERSARIAL_PROXIES
from src.voting.errors import InsufficientCells, InvalidParam
from src.voting.experiments.fitting import fit_scaling
from src.voting.experiments.pipeline.builder import cell_app
from src.voting.experiments.pipeline.nodes.simulate import simulate_trial
from src.voting.experiments.plans import cell_param, graph_seed
from src.voting.experiments.stats import rows_frame
from src.voting.graph.core import Graph
from src.voting.graph.generators import GeneratorSpec, generate
from src.voting.state.schemas import (
    CellSummary,
    ExperimentPlan,
    ExperimentResult,
    Trajectory,
    create_initial_cell_state,
)
from src.voting.utils.logging_config import get_logger, log_run_event

logger = get_logger(__name__)


def run_plan(
    plan: ExperimentPlan,
    out_dir: Optional[str | Path] = None,
    workers: Optional[int] = None,
) -> ExperimentResult:
    """Run all cells of ``plan`` in canonical order.

    Writes ``raw.csv`` (one row per trial and init) and ``summary.json``
    under ``out_dir`` when given. Cells are deterministic in
    (plan, master_seed) whatever the worker count.
    """
    workers = settings.workers if workers is None else workers
    logger.info("plan_started", plan_id=plan.plan_id, cells=len(plan.cells()), workers=workers)

    summaries: list[CellSummary] = []
    rows: list[dict] = []
    for index, (n, half_k) in enumerate(plan.cells()):
        state = create_initial_cell_state(
            plan, index, n, half_k, graph_seed(plan, index), workers=workers
        )
        final = cell_app.invoke(state)
        summaries.append(final["summary"])
        rows.extend(final["rows"])

    result = ExperimentResult(plan_id=plan.plan_id, cells=summaries)
    model = "log_n_over_log_k" if plan.half_k is not None else "log_n"
    try:
        result.fit = fit_scaling(result, model=model)
    except (InsufficientCells, InvalidParam) as exc:
        logger.warning("scaling_fit_skipped", plan_id=plan.plan_id, reason=str(exc))

    if out_dir is not None:
        target = Path(out_dir)
        target.mkdir(parents=True, exist_ok=True)
        raw_path = target / "raw.csv"
        summary_path = target / "summary.json"
        rows_frame(rows).write_csv(raw_path)
        result.raw_csv = str(raw_path)
        result.summary_json = str(summary_path)
        summary_path.write_text(
            json.dumps(result.model_dump(mode="json", by_alias=True), indent=2),
            encoding="utf-8",
        )

    log_run_event(
        logger,
        "plan_finished",
        spec_context={"plan_id": plan.plan_id, "spec": plan.voting.label},
        seed=plan.master_seed,
        outcome={
            "cells": len(summaries),
            "aborted": sum(1 for s in summaries if s.aborted),
            "fit": result.fit.model_dump() if result.fit else None,
        },
    )
    return result


def replay_trial(
    plan: ExperimentPlan, cell: int, trial: int, init: Optional[str] = None
) -> Trajectory:
    """Re-run one trial in isolation; identical to the run inside ``run_plan``.

    ``init`` names the proxy for adversarial plans.
    """
    if not 0 <= trial < plan.trials:
        raise InvalidParam("trial index out of range", trial=trial, trials=plan.trials)
    proxy: Optional[str] = None
    if plan.init.kind == "adversarial":
        proxy = init or ADVERSARIAL_PROXIES[0]
        if proxy not in ADVERSARIAL_PROXIES:
            raise InvalidParam("unknown adversarial proxy", init=proxy)

    graph, half_k = cell_graph(plan, cell)
    return simulate_trial(
        trial,
        plan=plan,
        cell=cell,
        graph=graph,
        half_k=half_k,
        classifier=None,
        proxy=proxy,
        record=True,
    )


def cell_graph(plan: ExperimentPlan, cell: int) -> tuple[Graph, Optional[int]]:
    """The graph of one cell, regenerated from its derived seed, with its half_k."""
    grid = plan.cells()
    if not 0 <= cell < len(grid):
        raise InvalidParam("cell index out of range", cell=cell, cells=len(grid))
    n, half_k = grid[cell]
    graph = generate(
        GeneratorSpec(
            family=plan.family,
            n=n,
            param=cell_param(plan, n, half_k),
            seed=graph_seed(plan, cell),
            retry_budget=plan.retry_budget or settings.retry_budget,
        )
    )
    return graph, half_k


def cell_trajectories(
    plan: ExperimentPlan, cell: int, init: Optional[str] = None
) -> tuple[Graph, list[Trajectory]]:
    """Recorded trajectories of every trial of one cell (drift-audit corpus)."""
    graph, half_k = cell_graph(plan, cell)
    proxy = (init or ADVERSARIAL_PROXIES[0]) if plan.init.kind == "adversarial" else None
    trajectories = [
        simulate_trial(trial, plan=plan, cell=cell, graph=graph, half_k=half_k,
                       classifier=None, proxy=proxy, record=True)
        for trial in range(plan.trials)
    ]
    return graph, trajectories
