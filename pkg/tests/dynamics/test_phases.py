import math

import pytest

from src.voting.dynamics.configuration import Configuration
from src.voting.dynamics.engine import run
from src.voting.dynamics.phases import GrowingKClassifier, PhaseClassifier, classify_phase
from src.voting.errors import InvalidParam, Unclassifiable
from src.voting.graph.core import VertexSet
from src.voting.kernels import betrayal as bt
from src.voting.kernels.profile import derive_profile
from src.voting.state.schemas import SpectralSummary


def summary_with(lam):
    return SpectralSummary(
        lam=lam, lambda2=lam, lambda_n=-lam / 2, method="dense", tol=0.0, iterations=0,
        spectral_gap=1.0 - lam,
    )


@pytest.fixture(scope="module")
def best_of_three_profile():
    return derive_profile(bt.best_of(3))


@pytest.fixture(scope="module")
def small(best_of_three_profile):
    return PhaseClassifier.from_profile(best_of_three_profile, summary_with(0.05), 1 / 64, 4096)


@pytest.fixture(scope="module")
def large(best_of_three_profile):
    n = 10**7
    return PhaseClassifier.from_profile(best_of_three_profile, summary_with(0.001), 1 / math.sqrt(n), n)


def test_thresholds(small):
    assert small.phase3_min == pytest.approx(1 / 12)
    assert small.phase3_max == pytest.approx(0.45)
    assert small.phase4_max == pytest.approx(1 / 48)
    assert small.phase5_max == pytest.approx(1 / 42)
    assert small.phase1_max == pytest.approx(math.log(4096) / 64)
    # the drift window is empty at this size
    assert small.phase2_min > small.phase2_max


@pytest.mark.parametrize(
    "delta,phase",
    [(0.0, "I"), (0.05, "I"), (0.3, "III"), (-0.3, "III"), (0.5, "III"), (0.955, "V"),
     (0.96, "IV"), (-0.99, "IV"), (1.0, "consensus"), (-1.0, "consensus")],
)
def test_small_graph_labels(small, delta, phase):
    assert small.classify(delta) == phase


@pytest.mark.parametrize("delta,phase", [(0.001, "I"), (0.02, "other"), (0.06, "II"), (-0.06, "II")])
def test_large_graph_labels(large, delta, phase):
    assert large.classify(delta) == phase


def test_explicit_consensus_flag(small):
    assert small.classify(0.3, consensus=True) == "consensus"
    assert small.classify(1.0, consensus=False) == "IV"


def test_one_off_classification(best_of_three_profile):
    assert classify_phase(0.3, best_of_three_profile, summary_with(0.05), 1 / 64, 4096) == "III"
    assert classify_phase(0.0, best_of_three_profile, summary_with(0.05), 1 / 64, 4096) == "I"


@pytest.mark.parametrize("spec", [bt.pull(), bt.majority()], ids=lambda s: s.label)
def test_unclassifiable_rules(spec):
    profile = derive_profile(spec, strict=False)
    with pytest.raises(Unclassifiable):
        PhaseClassifier.from_profile(profile, summary_with(0.05), 1 / 64, 4096)


def test_phase_constants_must_be_ordered(best_of_three_profile):
    with pytest.raises(Unclassifiable):
        PhaseClassifier.from_profile(best_of_three_profile, summary_with(0.05), 1 / 64, 4096, c3=0.6)


@pytest.mark.parametrize(
    "delta,phase", [(0.001, "I"), (0.1, "II"), (0.5, "III"), (0.95, "IV"), (1.0, "consensus")]
)
def test_growing_k_labels(delta, phase):
    classifier = GrowingKClassifier.for_order(16, 10**6, C=1e-3)
    assert classifier.phase2_max == pytest.approx(0.3125)
    assert classifier.classify(delta) == phase
    assert classifier.classify(-delta) == phase


def test_run_labels_every_point(gnp_256, best_of_three, best_of_three_profile, rng):
    dist = gnp_256.distribution
    classifier = PhaseClassifier.from_profile(best_of_three_profile, summary_with(0.1), dist.norm2, 256)
    init = Configuration.of(gnp_256, VertexSet(rng.random(256) < 0.5))
    trajectory = run(gnp_256, best_of_three, init, rng=3, classifier=classifier)
    assert trajectory.steps[0].phase == classifier.classify(init.delta)
    assert trajectory.steps[-1].phase == "consensus"
    assert {p.phase for p in trajectory.steps} <= {"I", "II", "III", "IV", "V", "other", "consensus"}


def test_growth_band_classifier():
    bands = PhaseClassifier.growth_band(0.02, 0.4)
    assert [bands.classify(d) for d in (0.01, 0.02, -0.3, 0.4, 0.6, 1.0)] == [
        "I", "II", "II", "II", "other", "consensus",
    ]
    with pytest.raises(InvalidParam):
        PhaseClassifier.growth_band(0.4, 0.2)
    with pytest.raises(InvalidParam):
        PhaseClassifier.growth_band(-0.1, 0.2)
