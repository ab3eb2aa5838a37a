"""Command line: ``python -m src.cli <command> ...``.

Results are JSON on stdout; logs go to stderr. A VotingError, a plan
validation error or an unreadable input file exits with status 2.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ValidationError

from config.settings import settings
from src.voting import __version__
from src.voting.checks.corpus import SUITES, run_check_corpus, write_check_csv
from src.voting.dynamics.engine import run
from src.voting.dynamics.init import build_init
from src.voting.dynamics.phases import GrowingKClassifier, PhaseClassifier, PhaseModel
from src.voting.dynamics.streams import CounterStream
from src.voting.dynamics.trace import write_trace
from src.voting.errors import InvalidParam, InvalidSpec, NotSmooth, Unclassifiable, VotingError
from src.voting.experiments.drift import drift_audit
from src.voting.experiments.fitting import compare_to_constant
from src.voting.experiments.plans import builtin_plan, cell_voting, load_plan
from src.voting.experiments.runner import cell_trajectories, replay_trial, run_plan
from src.voting.graph.core import Graph
from src.voting.graph.edgelist import load_edge_list, save_edge_list
from src.voting.graph.generators import GeneratorSpec, generate
from src.voting.graph.spectral import expansion
from src.voting.kernels import betrayal as bt
from src.voting.kernels.growing import bok_growing_constants, bok_threshold_scan
from src.voting.kernels.profile import derive_profile
from src.voting.kernels.quasi_majority import quasi_majority_check
from src.voting.state.schemas import BetrayalSpec, ExperimentPlan, InitRule
from src.voting.utils.logging_config import configure_logging, get_logger

logger = get_logger(__name__)

FAMILIES = [
    "gnp", "random-regular", "complete-self-loop", "complete", "complete-bipartite", "cycle",
]
BUILTIN_PLANS = [
    "worst-case-best-of-two", "worst-case-best-of-three", "lower-bound",
    "fast-consensus", "fast-consensus-balanced", "growing-k", "growing-k-root", "adversarial",
]


# === OUTPUT ===

def _emit(payload: Any) -> None:
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json", by_alias=True)
    json.dump(payload, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


# === SHARED ARGUMENTS ===

def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--f", "--kind", dest="kind", default="best-of-k",
                   help="pull | best-of-k | k-careful | majority | custom")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--rho", type=float, default=None, help="lazy wrapper probability")
    p.add_argument("--expression", default=None, help="custom f(x), e.g. '3*x**2 - 2*x**3'")
    p.add_argument("--table", type=Path, default=None, help="custom f as a two-column x,y CSV")


def _spec_from(args: argparse.Namespace) -> BetrayalSpec:
    if args.kind == "custom" or args.expression or args.table:
        if args.table is not None:
            try:
                xs, ys = np.loadtxt(args.table, delimiter=",", unpack=True, ndmin=2)
            except ValueError as exc:
                raise InvalidSpec("table must be two numeric x,y columns",
                                  path=str(args.table)) from exc
            base = bt.tabulated(xs.tolist(), ys.tolist())
        elif args.expression:
            base = bt.expression(args.expression)
        else:
            raise InvalidSpec("custom needs --expression or --table")
        return bt.lazy(args.rho, base) if args.rho not in (None, 1.0) else base
    return bt.from_name(args.kind, args.k, args.rho)


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", "--graph", dest="graph", type=Path, default=None,
                   help="edge-list file")
    p.add_argument("--family", choices=FAMILIES, default="gnp")
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--param", "--p", "--d", dest="param", type=float, default=None,
                   help="p for gnp, d for random-regular, left-side size for bipartite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=["pairing", "repair"], default=None)


def _graph_from(args: argparse.Namespace) -> Graph:
    if args.graph is not None:
        return load_edge_list(args.graph)
    spec = GeneratorSpec(
        family=args.family,
        n=args.n,
        param=args.param,
        seed=args.seed,
        method=args.method or settings.regular_method,
    )
    return generate(spec)


def _add_plan_args(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--plan", type=Path, help="plan file (.json or YAML)")
    group.add_argument("--builtin", choices=BUILTIN_PLANS)
    p.add_argument("--trials", type=int, default=None, help="override trials per cell")
    p.add_argument("--master-seed", type=int, default=None)


def _plan_from(args: argparse.Namespace) -> ExperimentPlan:
    plan = load_plan(args.plan) if args.plan is not None else builtin_plan(args.builtin)
    overrides: dict[str, Any] = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.master_seed is not None:
        overrides["master_seed"] = args.master_seed
    if overrides:
        plan = ExperimentPlan.model_validate({**plan.model_dump(), **overrides})
    return plan


# === COMMANDS ===

def cmd_generate(args: argparse.Namespace) -> None:
    graph = _graph_from(args)
    if args.out is not None:
        save_edge_list(graph, args.out)
    _emit({**graph.describe(), "out": str(args.out) if args.out else None})


def cmd_spectral(args: argparse.Namespace) -> None:
    graph = _graph_from(args)
    summary = expansion(graph, tol=args.tol, method=args.solver, seed=args.seed)
    dist = graph.distribution
    _emit({**summary.model_dump(by_alias=True), "n": graph.n,
           "pi2": dist.norm2, "pi3": dist.norm3})


def cmd_verify(args: argparse.Namespace) -> None:
    spec = _spec_from(args)
    report = quasi_majority_check(spec)
    profile = derive_profile(spec, strict=False)
    _emit({"quasi_majority": report.model_dump(mode="json"),
           "failed": report.failed,
           "profile": profile.model_dump(mode="json")})


def cmd_bok(args: argparse.Namespace) -> None:
    if args.scan is not None:
        _emit(bok_threshold_scan(args.scan, grid_points=args.grid_points))
    else:
        _emit(bok_growing_constants(args.k, grid_points=args.grid_points))


def _classifier(
    spec: BetrayalSpec, graph: Graph, args: argparse.Namespace
) -> Optional[PhaseModel]:
    if args.phases == "none":
        return None
    if args.phases == "growing_k":
        return GrowingKClassifier.for_order(max(1, ((args.k or 3) - 1) // 2), graph.n)
    try:
        profile = derive_profile(spec)
        summary = expansion(graph, seed=args.seed)
        return PhaseClassifier.from_profile(profile, summary, graph.distribution.norm2, graph.n)
    except (NotSmooth, Unclassifiable) as exc:
        logger.warning("phase_labels_unavailable", reason=str(exc))
        return None


def _init_rule(args: argparse.Namespace) -> InitRule:
    """``--init kind[:value]``: ``fraction:0.2`` sets delta0, ``file:path`` the path."""
    kind, _, value = args.init.partition(":")
    delta0, path = args.delta0, args.init_file
    if value and kind == "fraction":
        try:
            delta0 = float(value)
        except ValueError as exc:
            raise InvalidParam("fraction needs a numeric delta0", init=args.init) from exc
    elif value and kind == "file":
        path = value
    elif value:
        raise InvalidParam(f"--init {kind} takes no value", init=args.init)
    return InitRule.model_validate({"kind": kind, "delta0": delta0, "path": path})


def cmd_simulate(args: argparse.Namespace) -> None:
    graph = _graph_from(args)
    spec = bt.validate(_spec_from(args))
    run_seed = args.seed if args.run_seed is None else args.run_seed
    init = build_init(graph, _init_rule(args), np.random.default_rng(run_seed))
    trajectory = run(
        graph,
        spec,
        init,
        max_steps=args.max_steps,
        rng=CounterStream(run_seed),
        classifier=_classifier(spec, graph, args),
        record=True,
    )
    if args.trace is not None:
        write_trace(trajectory, args.trace)
    _emit({"terminal": trajectory.terminal, "t_cons": trajectory.t_cons,
           "seed": trajectory.seed, "steps": len(trajectory.steps) - 1,
           "initial_delta": init.delta, "trace": str(args.trace) if args.trace else None})


def cmd_check(args: argparse.Namespace) -> None:
    results = run_check_corpus(args.suite, instances=args.instances, seed=args.seed)
    if args.out is not None:
        write_check_csv(results, args.out)
    counted = [r for r in results if not r.informational]
    failures = [r for r in counted if not r.passed]
    _emit({"suite": args.suite, "results": len(results), "checked": len(counted),
           "failures": len(failures), "failed": [r.model_dump() for r in failures[:20]]})
    if failures:
        raise SystemExit(1)


def cmd_sweep(args: argparse.Namespace) -> None:
    plan = _plan_from(args)
    out_dir = args.out_dir or Path(settings.output_dir) / plan.plan_id
    result = run_plan(plan, out_dir=out_dir, workers=args.workers)
    payload = result.model_dump(mode="json", by_alias=True)
    if args.compare and result.fit is not None and result.fit.model != "const":
        payload["comparison"] = compare_to_constant(result, model=result.fit.model).model_dump()
    _emit(payload)


def cmd_audit(args: argparse.Namespace) -> None:
    plan = _plan_from(args)
    graph, trajectories = cell_trajectories(plan, args.cell, init=args.init)
    half_k = plan.cells()[args.cell][1]
    profile = derive_profile(cell_voting(plan, half_k), strict=False)
    summary = expansion(graph, method=plan.spectral_method)
    bands = (args.phase2_min, args.phase2_max)
    if (bands[0] is None) != (bands[1] is None):
        raise InvalidParam("--phase2-min and --phase2-max go together")
    report = drift_audit(
        trajectories,
        profile,
        summary,
        graph.n,
        graph.distribution.norm2,
        form=plan.phase_model,
        half_k=half_k,
        classifier=PhaseClassifier.growth_band(*bands) if bands[0] is not None else None,
    )
    _emit({**report.model_dump(), "cell": args.cell, "n": graph.n,
           "calibrated_bands": list(bands) if bands[0] is not None else None})


def cmd_replay(args: argparse.Namespace) -> None:
    plan = _plan_from(args)
    trajectory = replay_trial(plan, args.cell, args.trial, init=args.init)
    if args.trace is not None:
        write_trace(trajectory, args.trace)
    _emit({"cell": args.cell, "trial": args.trial, "seed": trajectory.seed,
           "terminal": trajectory.terminal, "t_cons": trajectory.t_cons})


# === PARSER ===

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="voting", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--log-level", default=settings.log_level)
    parser.add_argument("--log-format", choices=["json", "console"], default=settings.log_format)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a graph and write its edge list")
    _add_graph_args(p)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("spectral", help="expansion parameter and pi norms")
    _add_graph_args(p)
    p.add_argument("--solver", choices=["auto", "dense", "power", "lanczos"], default="auto")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("verify", help="quasi-majority conditions and profile constants")
    _add_spec_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bok", help="growing-k constants of best-of-(2k+1)")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--scan", type=int, default=None, metavar="K_MAX")
    p.add_argument("--grid-points", type=int, default=None)
    p.set_defaults(func=cmd_bok)

    p = sub.add_parser("simulate", help="one consensus run")
    _add_graph_args(p)
    _add_spec_args(p)
    p.add_argument("--init", default="balanced",
                   help="balanced | fraction[:delta0] | volume-balanced | high-degree-half"
                        " | bfs-ball | file[:path]")
    p.add_argument("--delta0", type=float, default=None)
    p.add_argument("--init-file", default=None)
    p.add_argument("--run-seed", type=int, default=None, help="defaults to --seed")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--phases", choices=["general", "growing_k", "none"], default="general")
    p.add_argument("--trace", type=Path, default=None, help="write t, pi_a, delta, phase CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check", help="randomized corpus of the moment and mixing bounds")
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    p.add_argument("--instances", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="run an experiment plan")
    _add_plan_args(p)
    p.add_argument("--out-dir", type=Path, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--compare", action="store_true", help="F-test against the constant model")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("audit", help="phase-II drift audit of one plan cell")
    _add_plan_args(p)
    p.add_argument("--cell", type=int, default=0)
    p.add_argument("--init", default=None, help="adversarial proxy")
    p.add_argument("--phase2-min", type=float, default=None,
                   help="calibrated growth band, lower |delta|")
    p.add_argument("--phase2-max", type=float, default=None,
                   help="calibrated growth band, upper |delta|")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("replay", help="re-run one (cell, trial) of a plan")
    _add_plan_args(p)
    p.add_argument("--cell", type=int, required=True)
    p.add_argument("--trial", type=int, required=True)
    p.add_argument("--init", default=None, help="adversarial proxy")
    p.add_argument("--trace", type=Path, default=None)
    p.set_defaults(func=cmd_replay)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, args.log_format)
    try:
        args.func(args)
    except (VotingError, ValidationError, OSError) as exc:
        context = getattr(exc, "context", {})
        logger.error("command_failed", command=args.command, error=str(exc),
                     error_type=type(exc).__name__, **context)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
