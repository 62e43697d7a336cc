"""Covering direct search method."""

from .cdsm import (
    CDSMSolver,
    EvaluationRecord,
    History,
    IterationState,
    RunTrace,
    SolverConfig,
    StepKind,
    StopReason,
    argmin_first,
    covering_candidate,
    random_orthogonal_positive_basis,
    solve,
    update_step,
)

__all__ = [
    "CDSMSolver",
    "EvaluationRecord",
    "History",
    "IterationState",
    "RunTrace",
    "SolverConfig",
    "StepKind",
    "StopReason",
    "argmin_first",
    "covering_candidate",
    "random_orthogonal_positive_basis",
    "solve",
    "update_step",
]
