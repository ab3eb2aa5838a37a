import pytest

from src.voting.checks import bounds
from src.voting.errors import InvalidSpec, NotSmooth
from src.voting.graph.core import VertexSet
from src.voting.graph.spectral import expansion
from src.voting.kernels import betrayal as bt
from src.voting.kernels.growing import bok_growing_constants
from src.voting.kernels.profile import derive_profile


@pytest.fixture
def k5_summary(k5):
    return expansion(k5, method="dense")


def subset(n, *ids):
    return VertexSet.from_indices(n, ids)


def test_mixing_on_k5(k5, k5_summary):
    result = bounds.check_mixing(k5, subset(5, 0), subset(5, 1), k5_summary)
    assert result.lhs == pytest.approx(0.01)
    assert result.bound == pytest.approx(0.04)
    assert result.passed and result.slack > 0


def test_mixing_is_tight_for_a_single_vertex(k5, k5_summary):
    # no self-loops: Q({v},{v}) = 0, so the deviation equals the bound
    result = bounds.check_mixing(k5, subset(5, 0), subset(5, 0), k5_summary)
    assert result.lhs == pytest.approx(0.04)
    assert result.bound == pytest.approx(0.04)
    assert result.passed


def test_weighted_variance_on_k5(k5, k5_summary):
    result = bounds.check_weighted_variance(k5, subset(5, 0), k5_summary)
    assert result.lhs == pytest.approx(0.01)
    assert result.bound == pytest.approx(0.01)
    assert result.passed


def test_set_checks_pass_on_random_sets(gnp_256, rng):
    summary = expansion(gnp_256)
    for _ in range(5):
        s = VertexSet(rng.random(256) < rng.random())
        t = VertexSet(rng.random(256) < rng.random())
        assert bounds.check_mixing(gnp_256, s, t, summary).passed
        assert bounds.check_weighted_variance(gnp_256, s, summary).passed
        assert bounds.check_square_deviation(gnp_256, s, summary).passed


@pytest.mark.parametrize("h", [bt.best_of(3), bt.careful(2)], ids=lambda s: s.label)
def test_taylor_checks_pass(gnp_256, rng, h):
    summary = expansion(gnp_256)
    profile = derive_profile(h)
    s = VertexSet(rng.random(256) < 0.3)
    t = VertexSet(rng.random(256) < 0.6)
    assert bounds.check_taylor_q_h(gnp_256, s, t, h, profile, summary).passed
    assert bounds.check_r_h_deviation(gnp_256, s, t, h, profile, summary).passed


def test_moment_checks_pass(gnp_256, rng, best_of_three):
    summary = expansion(gnp_256)
    profile = derive_profile(best_of_three)
    a = VertexSet(rng.random(256) < 0.45)
    assert bounds.check_mean_drift(gnp_256, a, best_of_three, profile, summary).passed
    variance = bounds.check_variance(gnp_256, a, best_of_three, profile, summary)
    assert variance.passed and not variance.informational
    mean, var = bounds.check_symmetric_moments(gnp_256, a, best_of_three, profile, summary)
    assert mean.name == "symmetric_mean" and mean.passed
    assert var.name == "symmetric_variance" and var.passed


def test_extreme_bias_variance_is_informational(gnp_256, best_of_three):
    summary = expansion(gnp_256)
    a = VertexSet.from_indices(256, range(240))
    result = bounds.check_variance(gnp_256, a, best_of_three, derive_profile(best_of_three), summary)
    assert result.informational


def test_bok_checks(gnp_256, rng):
    summary = expansion(gnp_256)
    constants = bok_growing_constants(4)
    a = VertexSet(rng.random(256) < 0.5)
    assert bounds.check_bok_mean(gnp_256, a, constants, summary).passed
    assert bounds.check_bok_variance(gnp_256, a, constants, summary).instance.function == "best-of-9"


def test_symmetric_moments_reject_asymmetric_rule(gnp_256, best_of_two):
    summary = expansion(gnp_256)
    a = VertexSet.from_indices(256, range(100))
    with pytest.raises(InvalidSpec):
        bounds.check_symmetric_moments(gnp_256, a, best_of_two, derive_profile(best_of_two), summary)


def test_checks_need_smooth_functions(gnp_256):
    summary = expansion(gnp_256)
    a = VertexSet.from_indices(256, range(100))
    partial = derive_profile(bt.majority(), strict=False)
    with pytest.raises(NotSmooth):
        bounds.check_mean_drift(gnp_256, a, bt.majority(), partial, summary)


def test_instance_records_set_sizes(k5, k5_summary):
    result = bounds.check_mixing(k5, subset(5, 0, 1), subset(5, 2), k5_summary, seed=9)
    assert result.instance.sets == {"S": 2, "T": 1}
    assert result.instance.seed == 9
    assert result.instance.n == 5
