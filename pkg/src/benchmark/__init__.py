"""Benchmark harness: cost model, multistart plans, result files and runner."""

from .harness import (
    CostModel,
    MultistartPlan,
    PlanRun,
    ProfilePoint,
    convergence_profile,
    generate_starts,
    run_baseline,
    run_plan,
    run_reformulated,
    run_reformulated_index,
)
from .results_writer import ResultsWriter, read_profile_csv, read_trace_csv
from .runner import BenchmarkRunner

__all__ = [
    "CostModel",
    "MultistartPlan",
    "PlanRun",
    "ProfilePoint",
    "convergence_profile",
    "generate_starts",
    "run_baseline",
    "run_plan",
    "run_reformulated",
    "run_reformulated_index",
    "ResultsWriter",
    "read_profile_csv",
    "read_trace_csv",
    "BenchmarkRunner",
]
