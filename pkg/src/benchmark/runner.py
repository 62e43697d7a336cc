"""
Benchmark runner: single solves, table reproductions and convergence profiles.
Reads its settings from config/config.yaml and writes every result under the
configured output directory.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
import yaml

from ..pof.core import PartitionedProblem
from ..problems.catalog import DESK_TABLES, POLL_RADIUS, ProblemId, TableSpec, make_problem, parse_problem_id
from ..problems.oracles import HEAVY_DIM2_BISECTION, BisectionSpec
from ..solver.cdsm import RunTrace, SolverConfig
from .harness import (
    MultistartPlan,
    PlanSummary,
    convergence_profile,
    generate_starts,
    run_plan,
    run_reformulated_index,
    run_seed,
)
from .results_writer import RUNS_FILE, ResultsWriter, run_metadata

NEVER = "/"


def threshold_label(threshold: float) -> str:
    return f"{threshold:.0e}"


def first_crossings(spec: TableSpec, trace: RunTrace) -> Dict:
    """
    Summary row of one table run.

    For each threshold, the first iteration k whose incumbent satisfies
    |x_hat^k| <= threshold and the value x_hat^k ("/" when never met), then
    the returned iteration and x_hat.
    """
    measures = [spec.measure(state.x) for state in trace.states]
    row: Dict = {}
    for threshold in spec.thresholds:
        label = threshold_label(threshold)
        k = next((k for k, m in enumerate(measures) if abs(m) <= threshold), None)
        row[f"k_{label}"] = NEVER if k is None else k
        row[f"xhat_{label}"] = NEVER if k is None else measures[k]
    row["returned_k"] = trace.iterations
    row["returned_xhat"] = measures[-1]
    return row


class BenchmarkRunner:
    """Runs the cDSM on the catalog problems with the settings of a YAML file."""

    def __init__(self, config_path: str = "config/config.yaml", output_dir: Optional[str] = None):
        """
        Initialize the runner.

        Args:
            config_path: Path to configuration YAML file
            output_dir: Overrides output.directory of the configuration
        """
        self.config = self._load_config(config_path)
        self.logger = self._setup_logging()
        self.logger.info(f"Configuration loaded from {config_path}")
        self.output_dir = output_dir or self.config.get("output", {}).get("directory", "outputs")

    def _setup_logging(self) -> logging.Logger:
        """Configure logging for the runner."""
        settings = self.config.get("logging", {})
        handlers: List[logging.Handler] = [logging.StreamHandler()]
        log_file = settings.get("log_file")
        if log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(log_file, mode="a"))
        logging.basicConfig(
            level=getattr(logging, str(settings.get("level", "INFO")).upper(), logging.INFO),
            format=settings.get("format", "%(asctime)s - %(name)s - %(levelname)s - %(message)s"),
            handlers=handlers,
        )
        return logging.getLogger(__name__)

    def _load_config(self, config_path: str) -> Dict:
        """Load configuration from YAML file."""
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                config = yaml.safe_load(f) or {}
        except OSError as e:
            raise OSError(f"cannot read configuration {config_path}: {e}") from e
        return config

    def writer(self, output_dir: Optional[str] = None) -> ResultsWriter:
        return ResultsWriter(output_dir or self.output_dir)

    # -- settings ---------------------------------------------------------------

    def solver_config_for(self, problem_id, seed: Optional[int] = None, **overrides) -> SolverConfig:
        """
        Solver settings of a problem: YAML solver section, the problem's poll
        radius factors, then explicit overrides (None values are ignored).
        """
        pid = parse_problem_id(problem_id)
        values = dict(self.config.get("solver", {}))
        shrink, expand = POLL_RADIUS[pid]
        radius = self.config.get("poll_radius", {}).get(pid.value, {})
        values.update({"shrink": radius.get("shrink", shrink), "expand": radius.get("expand", expand)})
        if seed is not None:
            values["seed"] = seed
        values.update({k: v for k, v in overrides.items() if v is not None})
        return SolverConfig.from_dict(values)

    def profile_config_for(self, problem_id, seed: Optional[int] = None, **overrides) -> SolverConfig:
        """Settings of profile runs: as solver_config_for, stopping at benchmark.delta_min."""
        if overrides.get("delta_min") is None:
            overrides["delta_min"] = self.config.get("benchmark", {}).get("delta_min")
        return self.solver_config_for(problem_id, seed, **overrides)

    def bisection_spec_for(self, problem_id) -> Optional[BisectionSpec]:
        pid = parse_problem_id(problem_id)
        settings = self.config.get("bisection", {})
        if pid is ProblemId.DIM2:
            return BisectionSpec(
                tolerance=settings.get("tolerance", BisectionSpec.tolerance),
                max_bracket_scan=settings.get("max_bracket_scan", BisectionSpec.max_bracket_scan),
            )
        if pid is ProblemId.HEAVY_DIM2:
            return BisectionSpec(
                tolerance=settings.get("g_inverse_tolerance", HEAVY_DIM2_BISECTION.tolerance),
                max_doublings=settings.get("max_doublings", BisectionSpec.max_doublings),
            )
        return None

    def problem(self, problem_id) -> PartitionedProblem:
        return make_problem(parse_problem_id(problem_id), self.bisection_spec_for(problem_id))

    def tau_for(self, problem_id) -> float:
        settings = self.config.get("benchmark", {})
        return float(settings.get("tau", {}).get(parse_problem_id(problem_id).value, settings.get("default_tau", 0.0)))

    @property
    def max_workers(self) -> int:
        return int(self.config.get("benchmark", {}).get("max_workers", 1))

    # -- single solve -----------------------------------------------------------------

    def solve_problem(
        self,
        problem_id,
        x0,
        seed: Optional[int] = None,
        trace_path: Optional[str] = None,
        **overrides,
    ) -> Dict:
        """
        Solve the reformulation of one problem from the index x0.

        Args:
            problem_id: Problem identifier
            x0: Starting index
            seed: Seed of the run (config value when None)
            trace_path: Where to write the trace CSV
            overrides: SolverConfig fields (shrink, expand, delta0, delta_min, max_iterations)

        Returns:
            Dictionary with the trace and the run statistics
        """
        pid = parse_problem_id(problem_id)
        problem = self.problem(pid)
        config = self.solver_config_for(pid, seed, **overrides)
        self.logger.info(f"Solving {pid.value} from x0={np.asarray(x0).tolist()} (seed {config.seed})")

        trace = run_reformulated_index(problem, x0, config)

        path = Path(trace_path) if trace_path else Path(self.output_dir) / f"solve_{pid.value}_trace.csv"
        self.writer(str(path.parent)).write_trace(trace, path.name)

        stats = {
            "problem": pid.value,
            "x_best": trace.x_best.tolist(),
            "value_best": trace.value_best,
            "iterations": trace.iterations,
            "evaluations": trace.evaluations,
            "stop_reason": trace.stop_reason.value,
            "recovered_dim": None if trace.recovered_y is None else int(trace.recovered_y.size),
            "recovered_value": trace.recovered_value,
            "trace_path": str(path),
            "trace": trace,
        }
        self.logger.info(
            f"{pid.value}: best value {trace.value_best:.6e} at {trace.x_best.tolist()} "
            f"after {trace.iterations} iterations ({trace.stop_reason.value})"
        )
        return stats

    # -- table reproduction --------------------------------------------------------------

    def reproduce_table(self, table: int, output_dir: Optional[str] = None, seed: Optional[int] = None) -> Dict:
        """
        Run the eight starts of a table.

        Writes one trace per row and a summary CSV with the first iterations
        meeting the table's thresholds.

        Returns:
            Dictionary with the summary frame and row statistics
        """
        if table not in DESK_TABLES:
            raise ValueError(f"table must be one of {sorted(DESK_TABLES)}, got {table}")
        spec = DESK_TABLES[table]
        problem = self.problem(spec.problem)
        writer = self.writer(output_dir)
        base_seed = int(self.config.get("solver", {}).get("seed", 0) if seed is None else seed)
        table_settings = self.config.get("tables", {}).get(table, {}) or {}
        max_iterations = table_settings.get("max_iterations", spec.max_iterations)

        self.logger.info("=" * 60)
        self.logger.info(f"Reproducing table {table} ({spec.problem.value}, {len(spec.starts)} starts)")
        self.logger.info("=" * 60)

        def run_row(row: int):
            config = self.solver_config_for(
                spec.problem, run_seed(base_seed, row, 0), max_iterations=max_iterations
            )
            try:
                return run_reformulated_index(problem, spec.starts[row], config)
            except Exception as e:
                self.logger.error(f"Table {table} row {spec.labels[row]} failed: {e}")
                return None

        rows = range(len(spec.starts))
        if self.max_workers > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                traces = list(pool.map(run_row, rows))
        else:
            traces = [run_row(row) for row in rows]

        summary_rows = []
        failed = []
        for row, trace in zip(rows, traces):
            entry = {"start": spec.labels[row]}
            if trace is None:
                failed.append(spec.labels[row])
                entry.update({f"k_{threshold_label(t)}": NEVER for t in spec.thresholds})
                entry["returned_xhat"] = "error"
            else:
                writer.write_trace(trace, f"table{table}_row{row + 1}_trace.csv")
                entry.update(first_crossings(spec, trace))
            summary_rows.append(entry)

        summary = pd.DataFrame(summary_rows)
        summary_path = writer.write_summary(summary, f"table{table}_summary.csv")

        stats = {
            "table": table,
            "problem": spec.problem.value,
            "rows": len(spec.starts),
            "successful": len(spec.starts) - len(failed),
            "failed": failed,
            "summary": summary,
            "summary_path": str(summary_path),
            "traces": traces,
        }
        self.logger.info(f"Table {table} complete: {stats['successful']}/{stats['rows']} rows")
        return stats

    def reproduce_tables(self, tables=(1, 2, 3, 4), output_dir: Optional[str] = None) -> Dict:
        """
        Reproduce several tables in a row.

        Returns:
            Dictionary with overall statistics
        """
        all_stats = [self.reproduce_table(table, output_dir) for table in tables]
        return {
            "tables_processed": len(all_stats),
            "total_rows": sum(s["rows"] for s in all_stats),
            "total_successful": sum(s["successful"] for s in all_stats),
            "table_stats": all_stats,
        }

    # -- convergence profiles --------------------------------------------------------------

    def run_profile(
        self,
        problem_id,
        tau: Optional[float] = None,
        budget: Optional[float] = None,
        starts: Optional[int] = None,
        seed: Optional[int] = None,
        baseline: bool = False,
        output_dir: Optional[str] = None,
    ) -> Dict:
        """
        Multistart comparison with convergence profiles.

        Writes profile_{problem}_{method}_{l}.csv for every run (l counts
        from 1) and one JSON line per run in runs.jsonl.

        Returns:
            Dictionary with the runs, file paths and final values
        """
        pid = parse_problem_id(problem_id)
        settings = self.config.get("benchmark", {})
        tau = self.tau_for(pid) if tau is None else tau
        budget = settings.get("budget", 5000) if budget is None else budget
        starts = settings.get("starts", 6) if starts is None else starts
        seed = settings.get("base_seed", 0) if seed is None else seed
        if not pid.is_heavy:
            self.logger.warning(f"{pid.value} is a desk-scale problem; profiles are meant for the heavy ones")

        plan = MultistartPlan(
            problem=pid,
            starts=generate_starts(pid, starts, seed),
            base_seed=seed,
            budget=budget,
            tau=tau,
            baseline=baseline,
        )
        self.logger.info("=" * 60)
        self.logger.info(
            f"Profiling {pid.value}: {starts} starts, tau={tau:g}, budget={budget:g}, baseline={baseline}"
        )
        self.logger.info("=" * 60)

        runs = run_plan(plan, self.profile_config_for(pid), self.max_workers)

        writer = self.writer(output_dir)
        writer.reset(RUNS_FILE)
        files = []
        for run in runs:
            if not run.succeeded:
                continue
            name = f"profile_{pid.value}_{run.method}_{run.start_index + 1}.csv"
            files.append(writer.write_profile(convergence_profile(run.trace), name))
            writer.append_run(run_metadata(run.trace, {"profile": name}))

        summary = PlanSummary.from_runs(runs)
        stats = {
            "problem": pid.value,
            "tau": tau,
            "budget": budget,
            "runs": runs,
            "files": [str(f) for f in files],
            "failed": [(r.start_index, r.method) for r in runs if not r.succeeded],
            "reformulated": summary.reformulated,
            "baseline": summary.baseline,
        }
        self.logger.info(
            f"Profile complete: median reformulated {summary.median('reformulated'):.3e}"
            + (f", median baseline {summary.median('baseline'):.3e}" if baseline else "")
        )
        return stats
