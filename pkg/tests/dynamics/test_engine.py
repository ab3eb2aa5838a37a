import math

import numpy as np
import polars as pl
import pytest
from scipy import stats

from src.voting.dynamics.configuration import Configuration
from src.voting.dynamics.engine import (
    default_max_steps,
    empirical_next_sizes,
    exact_moments,
    run,
    step,
    step_batch,
)
from src.voting.dynamics.streams import CounterStream
from src.voting.dynamics.trace import trajectory_frame, write_trace
from src.voting.graph.core import Graph, VertexSet
from src.voting.graph.generators import GeneratorSpec, generate
from src.voting.kernels import betrayal as bt


def cfg_of(g, *ids):
    return Configuration.of(g, VertexSet.from_indices(g.n, ids))


def random_cfg(g, rng, share=0.5):
    return Configuration.of(g, VertexSet(rng.random(g.n) < share))


# === ONE STEP ===

def test_consensus_is_absorbing(gnp_256, best_of_three, rng):
    empty = Configuration.of(gnp_256, VertexSet.empty(256))
    full = Configuration.of(gnp_256, VertexSet.full(256))
    assert np.all(step_batch(empty, gnp_256, best_of_three, rng, 1000) == 0.0)
    assert np.allclose(step_batch(full, gnp_256, best_of_three, rng, 1000), 1.0, atol=1e-12)
    assert step(empty, gnp_256, best_of_three, rng).a.is_empty()
    assert step(full, gnp_256, best_of_three, CounterStream(3), t=5).a.is_full()


def test_exact_moments_examples(triangle, best_of_two):
    assert exact_moments(Configuration.of(triangle, VertexSet.empty(3)), triangle, best_of_two) == (0.0, 0.0)
    mean, _ = exact_moments(cfg_of(triangle, 0), triangle, best_of_two)
    assert mean == pytest.approx(1 / 6, abs=1e-15)


def test_complete_graph_mean_is_updating_function(k200_loops, best_of_two, rng):
    cfg = cfg_of(k200_loops, *range(150))
    mean, variance = exact_moments(cfg, k200_loops, best_of_two)
    assert mean == pytest.approx(0.84375, abs=1e-12)
    samples = step_batch(cfg, k200_loops, best_of_two, rng, 10_000)
    sigma = math.sqrt(variance / len(samples))
    assert abs(samples.mean() - 0.84375) <= 4 * sigma


@pytest.mark.parametrize("spec", [bt.pull(), bt.best_of(2), bt.best_of(3), bt.careful(2)],
                         ids=lambda s: s.label)
def test_sampled_mean_matches_exact(gnp_256, spec):
    rng = np.random.default_rng(11)
    cfg = random_cfg(gnp_256, rng, 0.4)
    mean, variance = exact_moments(cfg, gnp_256, spec)
    samples = step_batch(cfg, gnp_256, spec, rng, 100_000)
    sigma = math.sqrt(variance / len(samples))
    assert abs(samples.mean() - mean) <= 5 * sigma
    assert samples.var() == pytest.approx(variance, rel=0.05)


def test_exchangeability_on_complete_graph(best_of_three):
    g = Graph.complete(50, self_loops=True)
    first = cfg_of(g, *range(20))
    second = cfg_of(g, *range(30, 50))
    rng = np.random.default_rng(5)
    a = empirical_next_sizes(first, g, best_of_three, rng, 10_000)
    b = empirical_next_sizes(second, g, best_of_three, rng, 10_000)
    assert stats.ks_2samp(a, b).pvalue > 1e-3


def test_counter_stream_is_positional():
    stream = CounterStream(99)
    assert np.array_equal(stream.uniforms(4, 10), stream.uniforms(4, 10))
    assert not np.array_equal(stream.uniforms(4, 10), stream.uniforms(5, 10))
    assert np.array_equal(stream.uniforms(7, 10)[:5], stream.uniforms(7, 5))


# === RUNS ===

def test_run_from_consensus(gnp_256, best_of_three):
    empty = run(gnp_256, best_of_three, Configuration.of(gnp_256, VertexSet.empty(256)))
    full = run(gnp_256, best_of_three, Configuration.of(gnp_256, VertexSet.full(256)))
    assert (empty.t_cons, empty.terminal) == (0, "consensus-1")
    assert (full.t_cons, full.terminal) == (0, "consensus-0")
    assert empty.steps[0].phase == "consensus"


def test_run_reaches_consensus_and_is_reproducible(gnp_256, best_of_three, rng):
    init = random_cfg(gnp_256, rng)
    first = run(gnp_256, best_of_three, init, rng=CounterStream(17))
    second = run(gnp_256, best_of_three, init, rng=17)
    assert first.terminal != "timeout"
    assert first.t_cons is not None and first.t_cons <= default_max_steps(256)
    assert first == second
    assert first.steps[-1].pi_a in (0.0, 1.0)


def test_run_first_step_matches_step(gnp_256, best_of_three, rng):
    init = random_cfg(gnp_256, rng)
    trajectory = run(gnp_256, best_of_three, init, rng=CounterStream(8))
    after = step(init, gnp_256, best_of_three, CounterStream(8), t=0)
    assert trajectory.steps[1].pi_a == pytest.approx(after.pi_a, abs=1e-12)


def test_symmetric_rule_gives_complementary_runs(gnp_256, best_of_three, rng):
    init = random_cfg(gnp_256, rng)
    forward = run(gnp_256, best_of_three, init, rng=CounterStream(23))
    mirrored = run(gnp_256, best_of_three, init.complement(gnp_256), rng=CounterStream(23))
    assert forward.t_cons == mirrored.t_cons
    assert {forward.terminal, mirrored.terminal} == {"consensus-0", "consensus-1"}
    for a, b in zip(forward.steps, mirrored.steps):
        assert a.pi_a + b.pi_a == pytest.approx(1.0, abs=1e-9)


def test_audit_does_not_change_the_run(gnp_256, best_of_three, rng):
    init = random_cfg(gnp_256, rng)
    audited = run(gnp_256, best_of_three, init, rng=5, audit_every=1)
    plain = run(gnp_256, best_of_three, init, rng=5, audit_every=10_000)
    assert audited.t_cons == plain.t_cons
    assert [p.pi_a for p in audited.steps] == pytest.approx([p.pi_a for p in plain.steps], abs=1e-12)


def test_timeout_is_a_terminal_state(gnp_256, rng):
    init = random_cfg(gnp_256, rng)
    trajectory = run(gnp_256, bt.pull(), init, max_steps=1, rng=1)
    assert trajectory.terminal == "timeout"
    assert trajectory.t_cons is None
    assert len(trajectory.steps) == 2


def test_run_rejects_zero_budget(gnp_256, best_of_three, rng):
    with pytest.raises(ValueError):
        run(gnp_256, best_of_three, random_cfg(gnp_256, rng), max_steps=0)


def test_unrecorded_run_keeps_outcome(gnp_256, best_of_three, rng):
    init = random_cfg(gnp_256, rng)
    bare = run(gnp_256, best_of_three, init, rng=2, record=False)
    full = run(gnp_256, best_of_three, init, rng=2)
    assert bare.steps == []
    assert bare.t_cons == full.t_cons


def test_default_max_steps():
    assert default_max_steps(1024) == 500
    assert default_max_steps(1000, factor=2) == 20


# === TRACES ===

def test_trace_export(tmp_path, gnp_256, best_of_three, rng):
    trajectory = run(gnp_256, best_of_three, random_cfg(gnp_256, rng), rng=4)
    path = write_trace(trajectory, tmp_path / "trace" / "run.csv")
    frame = pl.read_csv(path)
    assert frame.columns == ["t", "pi_a", "delta", "phase"]
    assert frame.height == len(trajectory.steps)
    assert trajectory_frame(trajectory)["t"].to_list() == list(range(frame.height))


# === RANDOM INSTANCES ===

MIXED_SPECS = [
    bt.pull(), bt.best_of(2), bt.best_of(3), bt.best_of(5), bt.careful(2), bt.careful(3),
    bt.lazy(0.5, bt.best_of(2)), bt.majority(), bt.expression("3*x**2 - 2*x**3"),
]


def random_instance(rng):
    family = str(rng.choice(["gnp", "random-regular", "complete-self-loop"]))
    n = 2 * int(rng.integers(20, 61))
    param = {
        "gnp": float(rng.uniform(0.3, 0.6)),
        "random-regular": float(rng.integers(3, 7)),
        "complete-self-loop": None,
    }[family]
    g = generate(GeneratorSpec(family=family, n=n, param=param, method="repair",
                               seed=int(rng.integers(2**32))))
    cfg = random_cfg(g, rng, float(rng.uniform(0.1, 0.9)))
    return g, cfg, MIXED_SPECS[int(rng.integers(len(MIXED_SPECS)))]


@pytest.mark.slow
def test_sampled_mean_matches_exact_on_random_instances():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        g, cfg, spec = random_instance(rng)
        mean, variance = exact_moments(cfg, g, spec)
        samples = step_batch(cfg, g, spec, rng, 100_000)
        sigma = math.sqrt(variance / len(samples))
        assert abs(samples.mean() - mean) <= 5 * sigma + 1e-12, (g.name, spec.label)
