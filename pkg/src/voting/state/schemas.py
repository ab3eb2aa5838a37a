"""State schemas: data contracts for results, plans and the cell pipeline state."""

import math
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator
from typing import TypedDict


Phase = Literal["I", "II", "III", "IV", "V", "consensus", "other"]
Terminal = Literal["consensus-0", "consensus-1", "timeout"]
BetrayalKind = Literal["pull", "best-of-k", "k-careful", "majority", "lazy", "custom"]


# === BETRAYAL FUNCTIONS ===
class BetrayalSpec(BaseModel):
    """Declarative betrayal function; evaluators live in ``voting.kernels.betrayal``."""

    model_config = ConfigDict(frozen=True)

    kind: BetrayalKind
    k: Optional[int] = Field(default=None, ge=1)
    rho: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    inner: Optional["BetrayalSpec"] = None
    table_x: Optional[tuple[float, ...]] = None
    table_y: Optional[tuple[float, ...]] = None
    expression: Optional[str] = None

    @model_validator(mode="after")
    def _fields_for_kind(self) -> "BetrayalSpec":
        if self.kind in ("best-of-k", "k-careful") and self.k is None:
            raise ValueError(f"{self.kind} needs k")
        if self.kind == "lazy" and (self.rho is None or self.inner is None):
            raise ValueError("lazy needs rho and inner")
        if self.kind == "custom":
            has_table = self.table_x is not None and self.table_y is not None
            if has_table == (self.expression is not None):
                raise ValueError("custom needs exactly one of table or expression")
            if has_table and len(self.table_x or ()) != len(self.table_y or ()):
                raise ValueError("table_x and table_y differ in length")
        return self

    @property
    def label(self) -> str:
        if self.kind == "best-of-k":
            return f"best-of-{self.k}"
        if self.kind == "k-careful":
            return f"{self.k}-careful"
        if self.kind == "lazy":
            assert self.inner is not None
            return f"{self.rho:g}-lazy {self.inner.label}"
        if self.kind == "custom":
            return f"custom({self.expression})" if self.expression else "custom(table)"
        return self.kind


BetrayalSpec.model_rebuild()


# === SPECTRAL ===
class SpectralSummary(BaseModel):
    """Extreme non-trivial eigenvalues of the random-walk matrix P."""

    lam: float = Field(serialization_alias="lambda", ge=0.0, le=1.0 + 1e-9)
    lambda2: float
    lambda_n: float
    method: Literal["dense", "power", "lanczos"]
    tol: float = Field(description="Certified eigenvalue error (residual norm)")
    iterations: int
    spectral_gap: float


# === KERNELS ===
class UpdatingProfile(BaseModel):
    """Constants of H_f used by the drift analysis; None when f is not C^2."""

    spec_label: str
    smooth: bool
    f_half: float
    h1_half: Optional[float] = None
    h1_zero: Optional[float] = None
    eps_h: Optional[float] = None
    eps_c: Optional[float] = None
    K1f: Optional[float] = None
    K2f: Optional[float] = None
    K1g: Optional[float] = None
    K2Hf: Optional[float] = None
    Kf: Optional[float] = None
    g_half: float
    error_bound: float = 0.0

    @computed_field  # type: ignore[prop-decorator]
    @property
    def available(self) -> bool:
        return self.smooth and self.Kf is not None


class ConditionVerdict(BaseModel):
    index: int
    name: str
    passed: bool
    value: Optional[float] = None
    detail: str = ""


class QuasiMajorityReport(BaseModel):
    spec_label: str
    conditions: list[ConditionVerdict]
    passed: bool
    well_formed: bool
    surjective: bool
    symmetric: bool

    @computed_field  # type: ignore[prop-decorator]
    @property
    def failed(self) -> list[int]:
        return [c.index for c in self.conditions if not c.passed]


class BokConstantsReport(BaseModel):
    """Growing-k constants of best-of-(2k+1)."""

    k: int
    order: int
    f1_half: float
    f1_half_exact: str
    lower_ok: bool
    upper_ok: bool
    upper_tight_ok: bool
    f2_max: float
    f2_argmax: float
    f2_ok: bool
    mean_constant: float
    variance_constant: float


class BokThresholdReport(BaseModel):
    k_max: int
    k0_lower: Optional[int]
    k0_upper: Optional[int]
    k0_second: Optional[int]


# === DYNAMICS ===
class TrajectoryPoint(BaseModel):
    t: int
    pi_a: float
    delta: float
    phase: Phase


class Trajectory(BaseModel):
    steps: list[TrajectoryPoint] = []
    terminal: Terminal
    t_cons: Optional[int] = None
    seed: int

    @model_validator(mode="after")
    def _t_cons_iff_consensus(self) -> "Trajectory":
        if (self.t_cons is None) != (self.terminal == "timeout"):
            raise ValueError("t_cons must be set exactly for consensus terminals")
        return self


# === CHECKS ===
class CheckInstance(BaseModel):
    graph: str
    n: int
    sets: dict[str, int] = {}
    function: str = ""
    seed: int = 0


class CheckResult(BaseModel):
    name: str
    lhs: float
    bound: float
    slack: float
    passed: bool
    informational: bool = False
    instance: CheckInstance


# === EXPERIMENTS ===
class ParamRule(BaseModel):
    """param = coef * n**n_exponent * k**k_exponent (rounded for regular degree)."""

    coef: float
    n_exponent: float = 0.0
    k_exponent: float = 0.0

    def value(self, n: int, half_k: Optional[int] = None) -> float:
        k = half_k if half_k is not None else 1
        return self.coef * n**self.n_exponent * k**self.k_exponent


class HalfKRule(BaseModel):
    """Best-of-(2k+1) order; either explicit values or k = ceil(coef * n**n_exponent)."""

    values: Optional[list[int]] = None
    coef: float = 1.0
    n_exponent: float = 0.25

    def for_n(self, n: int) -> list[int]:
        if self.values:
            return list(self.values)
        return [max(1, math.ceil(self.coef * n**self.n_exponent - 1e-9))]


class InitRule(BaseModel):
    kind: Literal[
        "balanced", "fraction", "volume-balanced", "high-degree-half", "bfs-ball",
        "file", "adversarial",
    ] = "balanced"
    delta0: Optional[float] = Field(default=None, ge=-1.0, le=1.0)
    path: Optional[str] = None


class HypothesisRule(BaseModel):
    kind: Literal["none", "worst_case", "initial_bias", "growing_k"] = "none"
    C: float = 1.0
    eps: float = 1.0


class ExperimentPlan(BaseModel):
    plan_id: str
    family: Literal["gnp", "random-regular", "complete-self-loop"]
    n_values: list[int] = Field(min_length=1)
    param: Optional[ParamRule] = None
    voting: BetrayalSpec = BetrayalSpec(kind="best-of-k", k=3)
    half_k: Optional[HalfKRule] = None
    init: InitRule = InitRule()
    trials: int = Field(default=50, ge=0)
    master_seed: int = 0
    max_steps_factor: int = Field(default=50, ge=1)
    hypothesis: HypothesisRule = HypothesisRule()
    phase_model: Literal["general", "growing_k"] = "general"
    spectral_method: Literal["auto", "dense", "power", "lanczos"] = "auto"
    retry_budget: Optional[int] = None
    keep_trajectories: bool = False

    def cells(self) -> list[tuple[int, Optional[int]]]:
        """Cell grid in canonical order: (n, half_k)."""
        grid: list[tuple[int, Optional[int]]] = []
        for n in self.n_values:
            if self.half_k is None:
                grid.append((n, None))
            else:
                grid.extend((n, k) for k in self.half_k.for_n(n))
        return grid


class CellSummary(BaseModel):
    plan_id: str
    cell: int
    n: int
    half_k: Optional[int] = None
    param: Optional[float] = None
    graph_seed: int
    lam: Optional[float] = Field(default=None, serialization_alias="lambda")
    pi2: Optional[float] = None
    pi3: Optional[float] = None
    trials: int = 0
    consensus_rate: Optional[float] = None
    median: Optional[float] = None
    median_grouped: Optional[float] = None
    p05: Optional[float] = None
    p95: Optional[float] = None
    mean: Optional[float] = None
    init_medians: dict[str, Optional[float]] = {}
    whp_threshold: Optional[float] = None
    whp_met: Optional[bool] = None
    hypothesis_ok: Optional[bool] = None
    aborted: bool = False
    abort_reason: Optional[str] = None


class ScalingFit(BaseModel):
    model: Literal["log_n", "log_n_over_log_k", "const"]
    statistic: Literal["median", "median_grouped", "p05", "p95", "mean"] = "median"
    slope: float
    intercept: float
    r_squared: float
    sse: float
    cells: int


class ModelComparison(BaseModel):
    """Nested F-test of a one-regressor fit against the constant model."""

    model: Literal["log_n", "log_n_over_log_k"]
    statistic: Literal["median", "median_grouped", "p05", "p95", "mean"] = "median"
    f_statistic: float
    p_value: float
    cells: int
    significant: bool


class ExperimentResult(BaseModel):
    plan_id: str
    cells: list[CellSummary] = []
    fit: Optional[ScalingFit] = None
    raw_csv: Optional[str] = None
    summary_json: Optional[str] = None


class DriftAuditReport(BaseModel):
    form: Literal["general", "growing_k"]
    factor: float
    transitions: int
    bad_events: int
    empirical_frequency: float
    bound_mean: float
    allowance: float
    passed: bool


# === CELL PIPELINE STATE (what flows through nodes) ===

class CellState(TypedDict):
    """State passed through experiment-cell nodes."""
    # Input
    plan: ExperimentPlan
    cell_index: int
    n: int
    half_k: int | None
    workers: int

    # Generated graph
    param: float | None
    graph_seed: int
    graph: Any | None
    spectral: dict[str, Any] | None
    pi_norms: dict[str, float] | None

    # Gates
    hypothesis_ok: bool | None
    aborted: bool
    abort_reason: str | None

    # Work products
    rows: list[dict[str, Any]]
    trajectories: list[Trajectory]

    # Output
    summary: CellSummary | None


def create_initial_cell_state(
    plan: ExperimentPlan,
    cell_index: int,
    n: int,
    half_k: int | None,
    graph_seed: int,
    workers: int = 1,
) -> CellState:
    """Create initial state with default None values."""
    return {
        "plan": plan,
        "cell_index": cell_index,
        "n": n,
        "half_k": half_k,
        "workers": workers,
        "param": None,
        "graph_seed": graph_seed,
        "graph": None,
        "spectral": None,
        "pi_norms": None,
        "hypothesis_ok": None,
        "aborted": False,
        "abort_reason": None,
        "rows": [],
        "trajectories": [],
        "summary": None,
    }
