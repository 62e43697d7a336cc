"""Benchmark problems: blackbox components, bisection oracles and the catalog."""

from .catalog import (
    INDEX_BOXES,
    NONLINEAR_LOCAL_MINIMUM,
    DESK_STARTS,
    DESK_TABLES,
    POLL_RADIUS,
    PROBLEM_IDS,
    ProblemId,
    TableSpec,
    fiber_point,
    list_problems,
    make_problem,
    parse_problem_id,
)
from .oracles import BisectionSpec, Interval, bisect_threshold, dim2_intervals, dim2_oracle

__all__ = [
    "INDEX_BOXES",
    "NONLINEAR_LOCAL_MINIMUM",
    "DESK_STARTS",
    "DESK_TABLES",
    "POLL_RADIUS",
    "PROBLEM_IDS",
    "ProblemId",
    "TableSpec",
    "fiber_point",
    "list_problems",
    "make_problem",
    "parse_problem_id",
    "BisectionSpec",
    "Interval",
    "bisect_threshold",
    "dim2_intervals",
    "dim2_oracle",
]
