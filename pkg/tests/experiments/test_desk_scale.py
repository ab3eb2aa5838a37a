"""Desk-scale runs of the built-in plans (minutes each; run with -m slow)."""

from pathlib import Path

import pytest

from src.voting.dynamics.phases import PhaseClassifier
from src.voting.experiments.drift import drift_audit
from src.voting.experiments.fitting import fit_scaling, lower_bound_threshold
from src.voting.experiments.plans import DESK_N, builtin_plan, cell_voting
from src.voting.experiments.runner import cell_trajectories, run_plan
from src.voting.graph.spectral import expansion
from src.voting.kernels import betrayal as bt
from src.voting.kernels.profile import derive_profile
from src.voting.state.schemas import ExperimentPlan, InitRule, ParamRule

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("name", ["worst-case-best-of-two", "worst-case-best-of-three"])
def test_worst_case_consensus_time_grows_like_log_n(tmp_path, name):
    result = run_plan(builtin_plan(name, trials=200), tmp_path)
    assert [c.n for c in result.cells] == DESK_N
    assert all(c.consensus_rate == 1.0 for c in result.cells)
    fit = fit_scaling(result, "log_n", "median_grouped")
    assert fit.cells == len(DESK_N)
    assert fit.slope > 0
    assert fit.r_squared >= 0.9


def test_fifth_percentile_above_lower_bound(tmp_path):
    plan = builtin_plan("lower-bound")
    result = run_plan(plan, tmp_path)
    profile = derive_profile(plan.voting)
    for cell in result.cells:
        assert cell.p05 is not None
        assert cell.p05 >= lower_bound_threshold(profile, cell.n), cell.n


def test_initial_bias_beats_balanced_start(tmp_path):
    biased = run_plan(builtin_plan("fast-consensus"), tmp_path / "biased").cells[0]
    balanced = run_plan(builtin_plan("fast-consensus-balanced"), tmp_path / "balanced").cells[0]
    assert biased.graph_seed == balanced.graph_seed
    assert biased.consensus_rate == balanced.consensus_rate == 1.0
    assert biased.median < balanced.median


def test_growing_order_shortens_consensus(tmp_path):
    result = run_plan(builtin_plan("growing-k"), tmp_path)
    largest = [c for c in result.cells if c.n == 8192]
    assert [c.half_k for c in largest] == [4, 16, 64]
    times = [c.median_grouped for c in largest]
    assert all(a >= b for a, b in zip(times, times[1:]))
    assert times[0] > times[-1]
    fit = fit_scaling(result, "log_n_over_log_k", "median_grouped")
    assert fit.slope > 0
    assert fit.r_squared >= 0.8


def test_general_drift_audit():
    plan = ExperimentPlan(
        plan_id="drift-general", family="gnp", n_values=[4096], param=ParamRule(coef=0.1),
        voting=bt.best_of(3), init=InitRule(kind="fraction", delta0=0.05), trials=500,
    )
    graph, trajectories = cell_trajectories(plan, 0)
    report = drift_audit(
        trajectories, derive_profile(plan.voting), expansion(graph), graph.n,
        graph.distribution.norm2, classifier=PhaseClassifier.growth_band(0.02, 0.4),
    )
    assert report.form == "general"
    assert report.transitions >= 500
    assert report.passed


def test_growing_order_drift_audit():
    plan = builtin_plan("growing-k", n_values=[2048], trials=500,
                        init=InitRule(kind="fraction", delta0=0.05))
    n, half_k = plan.cells()[1]
    assert half_k == 16
    graph, trajectories = cell_trajectories(plan, 1)
    report = drift_audit(
        trajectories, derive_profile(cell_voting(plan, half_k)), expansion(graph), n,
        graph.distribution.norm2, form="growing_k", half_k=half_k,
        classifier=PhaseClassifier.growth_band(0.01, 0.3125),
    )
    assert report.factor == pytest.approx(0.1)
    assert report.transitions >= 500
    assert report.passed


def test_worker_count_does_not_change_output(tmp_path):
    plan = builtin_plan("worst-case-best-of-three", trials=20)
    first = run_plan(plan, tmp_path / "one", workers=1)
    second = run_plan(plan, tmp_path / "two", workers=2)
    assert Path(first.raw_csv).read_bytes() == Path(second.raw_csv).read_bytes()
    assert first.cells == second.cells
