"""Synchronous functional voting.

Every vertex looks at the old configuration: a vertex in A switches to
opinion 1 with probability f(P(v, B)), a vertex in B switches to opinion 0
with probability f(P(v, A)). All switches are applied at once. One uniform
is drawn per vertex per step in ascending vertex order, so running from A
and from V minus A on the same stream gives complementary configurations
whenever f(x) + f(1 - x) = 1.
"""

import math
from typing import Optional

import numpy as np

from config.settings import settings
from src.voting.dynamics.configuration import Configuration
from src.voting.dynamics.phases import PhaseModel
from src.voting.dynamics.streams import CounterStream
from src.voting.graph.core import Graph, VertexSet, deg_in, pi_measure
from src.voting.kernels.betrayal import switch_probabilities
from src.voting.state.schemas import BetrayalSpec, Phase, Trajectory, TrajectoryPoint
from src.voting.utils.logging_config import get_logger, log_run_event

logger = get_logger(__name__)

_BATCH_ROWS = 1024


def switch_vector(g: Graph, spec: BetrayalSpec, mask: np.ndarray, deg_a: np.ndarray) -> np.ndarray:
    """Per-vertex switching probability given deg_A for the current A."""
    opposing = np.where(mask, g.deg - deg_a, deg_a)
    return switch_probabilities(spec, opposing, g.deg)


def default_max_steps(n: int, factor: Optional[int] = None) -> int:
    factor = settings.max_steps_factor if factor is None else factor
    return factor * max(1, math.ceil(math.log2(max(n, 2))))


def step(
    cfg: Configuration,
    g: Graph,
    spec: BetrayalSpec,
    rng: CounterStream | np.random.Generator,
    t: int = 0,
) -> Configuration:
    """One synchronous round; ``t`` positions a CounterStream."""
    mask = cfg.a.mask
    prob = switch_vector(g, spec, mask, deg_in(g, cfg.a))
    u = rng.uniforms(t, g.n) if isinstance(rng, CounterStream) else rng.random(g.n)
    return Configuration.of(g, VertexSet(mask ^ (u < prob)))


def step_batch(
    cfg: Configuration,
    g: Graph,
    spec: BetrayalSpec,
    rng: np.random.Generator,
    trials: int,
) -> np.ndarray:
    """pi(A') for ``trials`` independent rounds from the same configuration."""
    mask = cfg.a.mask
    prob = switch_vector(g, spec, mask, deg_in(g, cfg.a))
    pi = g.distribution.pi
    out = np.empty(trials, dtype=np.float64)
    for start in range(0, trials, _BATCH_ROWS):
        rows = min(_BATCH_ROWS, trials - start)
        new = mask ^ (rng.random((rows, g.n)) < prob)
        out[start:start + rows] = new @ pi
    return out


def exact_moments(cfg: Configuration, g: Graph, spec: BetrayalSpec) -> tuple[float, float]:
    """Closed-form (E[pi(A')], Var[pi(A')]) for one round from ``cfg``."""
    mask = cfg.a.mask
    q = switch_vector(g, spec, mask, deg_in(g, cfg.a))
    pi = g.distribution.pi
    mean = math.fsum(
        [cfg.pi_a, -math.fsum(pi[mask] * q[mask]), math.fsum(pi[~mask] * q[~mask])]
    )
    variance = math.fsum(pi**2 * q * (1.0 - q))
    return mean, variance


def empirical_next_sizes(
    cfg: Configuration,
    g: Graph,
    spec: BetrayalSpec,
    rng: np.random.Generator,
    trials: int,
) -> np.ndarray:
    """|A'| for ``trials`` independent rounds (exchangeability tests)."""
    mask = cfg.a.mask
    prob = switch_vector(g, spec, mask, deg_in(g, cfg.a))
    out = np.empty(trials, dtype=np.int64)
    for start in range(0, trials, _BATCH_ROWS):
        rows = min(_BATCH_ROWS, trials - start)
        new = mask ^ (rng.random((rows, g.n)) < prob)
        out[start:start + rows] = new.sum(axis=1)
    return out


def run(
    g: Graph,
    spec: BetrayalSpec,
    init: Configuration,
    max_steps: Optional[int] = None,
    rng: CounterStream | int = 0,
    *,
    classifier: Optional[PhaseModel] = None,
    record: bool = True,
    audit_every: Optional[int] = None,
) -> Trajectory:
    """Iterate ``step`` until A is empty or V, or ``max_steps`` rounds pass.

    deg_A and pi(A) are updated from the vertices that changed side and are
    recounted from scratch every ``audit_every`` rounds.
    """
    stream = rng if isinstance(rng, CounterStream) else CounterStream(int(rng))
    max_steps = default_max_steps(g.n) if max_steps is None else max_steps
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    audit_every = settings.audit_every if audit_every is None else audit_every

    pi = g.distribution.pi
    mask = init.a.mask.copy()
    size = init.a.cardinality
    deg_a = deg_in(g, init.a)
    pi_a = init.pi_a
    points: list[TrajectoryPoint] = []

    def label(consensus: bool) -> Phase:
        if classifier is not None:
            return classifier.classify(2.0 * pi_a - 1.0, consensus)
        return "consensus" if consensus else "other"

    def record_point(t: int, consensus: bool) -> None:
        if record:
            points.append(
                TrajectoryPoint(t=t, pi_a=pi_a, delta=2.0 * pi_a - 1.0, phase=label(consensus))
            )

    t = 0
    consensus = size in (0, g.n)
    record_point(0, consensus)
    while not consensus and t < max_steps:
        prob = switch_vector(g, spec, mask, deg_a)
        switch = stream.uniforms(t, g.n) < prob
        t += 1

        joined = switch & ~mask
        left = switch & mask
        mask ^= switch
        size += int(np.count_nonzero(joined)) - int(np.count_nonzero(left))
        deg_a += g.adjacency @ joined.astype(np.int64) - g.adjacency @ left.astype(np.int64)
        pi_a = math.fsum([pi_a, math.fsum(pi[joined]), -math.fsum(pi[left])])

        consensus = size in (0, g.n)
        if consensus:
            pi_a = 1.0 if size == g.n else 0.0
        elif t % audit_every == 0:
            pi_a, deg_a = _audit(g, mask, pi_a, deg_a, t)
        record_point(t, consensus)

    if consensus:
        terminal = "consensus-0" if size == g.n else "consensus-1"
        t_cons: Optional[int] = t
    else:
        terminal, t_cons = "timeout", None

    trajectory = Trajectory(steps=points, terminal=terminal, t_cons=t_cons, seed=stream.seed)
    log_run_event(
        logger,
        "consensus_run_finished",
        graph_context=g.describe(),
        spec_context={"spec": spec.label},
        seed=stream.seed,
        outcome={"terminal": terminal, "t_cons": t_cons, "steps": t},
    )
    return trajectory


def _audit(
    g: Graph, mask: np.ndarray, pi_a: float, deg_a: np.ndarray, t: int
) -> tuple[float, np.ndarray]:
    current = VertexSet(mask.copy())
    exact_pi = pi_measure(g, current)
    exact_deg = deg_in(g, current)
    if abs(exact_pi - pi_a) > settings.pi_audit_tolerance or not np.array_equal(exact_deg, deg_a):
        logger.error("incremental_state_drift", t=t, pi_incremental=pi_a, pi_exact=exact_pi)
    return exact_pi, exact_deg
