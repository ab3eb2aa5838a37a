"""State exports."""

from .schemas import (
    BetrayalSpec,
    BokConstantsReport,
    BokThresholdReport,
    CellState,
    CellSummary,
    CheckInstance,
    CheckResult,
    ConditionVerdict,
    DriftAuditReport,
    ExperimentPlan,
    ExperimentResult,
    ModelComparison,
    QuasiMajorityReport,
    ScalingFit,
    SpectralSummary,
    Trajectory,
    TrajectoryPoint,
    UpdatingProfile,
    create_initial_cell_state,
)

__all__ = [
    "BetrayalSpec",
    "BokConstantsReport",
    "BokThresholdReport",
    "CellState",
    "CellSummary",
    "CheckInstance",
    "CheckResult",
    "ConditionVerdict",
    "DriftAuditReport",
    "ExperimentPlan",
    "ExperimentResult",
    "ModelComparison",
    "QuasiMajorityReport",
    "ScalingFit",
    "SpectralSummary",
    "Trajectory",
    "TrajectoryPoint",
    "UpdatingProfile",
    "create_initial_cell_state",
]
