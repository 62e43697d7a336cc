"""
Tests for the benchmark harness, the results files and the runner.
"""

import math
import sys
import tempfile
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.benchmark.harness import (
    BASELINE,
    REFORMULATED,
    CostModel,
    MultistartPlan,
    PlanSummary,
    ProfilePoint,
    convergence_profile,
    generate_starts,
    run_baseline,
    run_plan,
    run_reformulated,
    run_seed,
)
from src.benchmark.results_writer import (
    PROFILE_COLUMNS,
    TRACE_COLUMNS,
    ResultsWriter,
    format_real,
    read_profile_csv,
    read_runs,
    read_trace_csv,
    run_metadata,
)
from src.benchmark.runner import NEVER, BenchmarkRunner, first_crossings
from src.pof.errors import InfeasibleStartError
from src.problems.catalog import DESK_TABLES, make_problem
from src.solver.cdsm import EvaluationRecord, IterationState, RunTrace, SolverConfig, StepKind, StopReason


def _trace(values, costs):
    best, records = math.inf, []
    for i, (value, cost) in enumerate(zip(values, costs)):
        best = min(best, value)
        records.append(EvaluationRecord(i, StepKind.POLL, np.array([float(i)]), value, cost, best))
    state = IterationState(0, np.array([0.0]), values[0], 1.0)
    return RunTrace(records, [state], [], np.array([0.0]), min(values), 0, StopReason.BUDGET)


def test_cost_model():
    assert CostModel().reformulated_cost == 1.0
    assert CostModel(tau=100).reformulated_cost == 101.0
    with pytest.raises(ValueError):
        CostModel(tau=-1.0)
    with pytest.raises(ValueError):
        CostModel(tau=math.inf)
    print("✓ Cost model working")


def test_convergence_profile_examples():
    profile = convergence_profile(_trace([5.0, 3.0, 4.0], [1.0, 2.0, 3.0]))
    assert [p.best_value for p in profile] == [5.0, 3.0, 3.0]
    assert len(convergence_profile(_trace([2.0], [1.0]))) == 1
    collapsed = convergence_profile(_trace([5.0, 3.0, 4.0], [1.0, 1.0, 2.0]))
    assert collapsed == [ProfilePoint(1.0, 3.0), ProfilePoint(2.0, 3.0)]
    empty = RunTrace([], [], [], np.array([0.0]), math.inf, 0, StopReason.BUDGET)
    with pytest.raises(ValueError):
        convergence_profile(empty)
    print("✓ Convergence profiles working")


def test_run_seed_is_deterministic():
    assert run_seed(7, 0, 0) == run_seed(7, 0, 0)
    assert len({run_seed(7, i, m) for i in range(6) for m in range(2)}) == 12
    assert 0 <= run_seed(0, 0, 0) < 2**64


class TestGenerateStarts:
    def test_heavy_nonlinear_caption_points(self):
        starts = generate_starts("heavy_nonlinear", 3, 123)
        i = np.arange(1, 101)
        np.testing.assert_array_equal(starts[0], i / 100.0)
        np.testing.assert_array_equal(starts[1], np.full(100, 0.5))
        np.testing.assert_array_equal(starts[2], 2.0 * i / 100.0)

    def test_heavy_nonlinear_random_blocks(self):
        starts = generate_starts("heavy_nonlinear", 6, 5)
        i = np.arange(1, 101)
        for y0 in starts[3:]:
            assert np.all(y0 >= np.maximum((i - 1) / 100.0, 1e-6))
            assert np.all(y0 <= i / 100.0)

    def test_heavy_mono_box(self):
        starts = generate_starts("heavy_mono", 6, 7)
        assert len(starts) == 6
        for y0 in starts:
            assert y0.shape == (101,)
            assert np.all(np.abs(y0) <= 30.0)

    def test_heavy_radial_box(self):
        (y0,) = generate_starts("heavy_radial", 1, 1)
        assert y0.shape == (101,)
        assert np.all((y0 >= 0.0) & (y0 <= 2 * math.pi))

    def test_heavy_dim2_box(self):
        for y0 in generate_starts("heavy_dim2", 3, 2):
            assert np.all(np.abs(y0) <= 5.0)

    def test_pure_function_of_seed(self):
        a = generate_starts("heavy_dim2", 4, 99)
        b = generate_starts("heavy_dim2", 4, 99)
        for u, v in zip(a, b):
            np.testing.assert_array_equal(u, v)

    def test_every_start_fits_a_plan(self):
        for pid in ("mono", "radial", "heavy_mono", "heavy_radial", "heavy_nonlinear", "heavy_dim2"):
            MultistartPlan(pid, generate_starts(pid, 6, 0))

    def test_invalid_count(self):
        with pytest.raises(ValueError):
            generate_starts("heavy_mono", 0, 0)


class TestRuns:
    def test_reformulated_cost_accounting(self):
        problem = make_problem("heavy_mono")
        (y0,) = generate_starts("heavy_mono", 1, 3)
        trace = run_reformulated(problem, y0, SolverConfig(seed=1), CostModel(tau=100), budget=5000)
        costs = [r.cumulative_cost for r in trace.records]
        assert costs == [101.0 * (i + 1) for i in range(len(costs))]
        assert len(costs) <= 49
        assert trace.total_cost <= 5000
        assert trace.metadata["method"] == REFORMULATED
        assert trace.recovered_y.shape == (101,)

    def test_mono_from_pi(self):
        trace = run_reformulated(make_problem("mono"), [math.pi, 0.0], SolverConfig(seed=2), budget=1e4)
        assert trace.value_best <= 1e-8
        assert trace.recovered_value == pytest.approx(trace.value_best, abs=1e-12)

    def test_radial_from_e(self):
        trace = run_reformulated(make_problem("radial"), [math.e, 0.0], SolverConfig(seed=2))
        assert abs(trace.x_best[0] - math.sqrt(2.0)) <= 1e-8

    def test_infeasible_index_start(self):
        with pytest.raises(InfeasibleStartError):
            run_reformulated(make_problem("mono"), [40.0, 0.0], SolverConfig())

    def test_baseline_stays_in_box(self):
        problem = make_problem("mono")
        trace = run_baseline(problem, [math.pi, 0.0], SolverConfig(seed=3), CostModel(), budget=1e4)
        assert trace.value_best <= 1.0
        assert trace.metadata["method"] == BASELINE
        for record in trace.records:
            assert record.step_kind in (StepKind.INITIAL, StepKind.POLL)
            assert problem.in_box_y(record.x) or record.value == math.inf
        assert [r.cumulative_cost for r in trace.records][:3] == [1.0, 2.0, 3.0]

    def test_baseline_rejects_start_outside_box(self):
        with pytest.raises(InfeasibleStartError):
            run_baseline(make_problem("mono"), [0.0, 100.0], SolverConfig())

    def test_plan_validates_starts(self):
        with pytest.raises(ValueError):
            MultistartPlan("heavy_mono", [np.full(101, 31.0)])
        with pytest.raises(ValueError):
            MultistartPlan("heavy_mono", [])

    def test_run_plan_keeps_order(self):
        plan = MultistartPlan("mono", [[1.0, 0.0], [-2.5, 3.0], [0.5, 0.0]], base_seed=4, budget=300, baseline=True)
        for workers in (1, 3):
            runs = run_plan(plan, SolverConfig(), max_workers=workers)
            assert [(r.start_index, r.method) for r in runs] == [
                (0, REFORMULATED), (0, BASELINE),
                (1, REFORMULATED), (1, BASELINE),
                (2, REFORMULATED), (2, BASELINE),
            ]
            assert all(r.succeeded for r in runs)
            assert all(r.trace.total_cost <= 300 for r in runs)
        summary = PlanSummary.from_runs(runs)
        assert len(summary.reformulated) == 3 and len(summary.baseline) == 3
        assert PlanSummary().median(BASELINE) == math.inf

    def test_run_plan_reports_failures(self, monkeypatch):
        from src.benchmark import harness

        def failing(*args, **kwargs):
            raise InfeasibleStartError("Phi is +inf at the start")

        monkeypatch.setattr(harness, "run_reformulated", failing)
        plan = MultistartPlan("mono", [[1.0, 0.0]], budget=100, baseline=True)
        runs = run_plan(plan, SolverConfig(), max_workers=1)
        assert not runs[0].succeeded
        assert "+inf" in runs[0].error
        assert runs[1].succeeded


def test_format_real():
    assert format_real(101.0) == "101"
    assert format_real(0.5) == "0.5"
    assert format_real(math.inf) == "inf"
    assert format_real(-math.inf) == "-inf"
    assert format_real(0.1 + 0.2) == "0.30000000000000004"
    print("✓ Number formatting working")


def test_profile_files():
    with tempfile.TemporaryDirectory() as tmpdir:
        writer = ResultsWriter(tmpdir)
        path = writer.write_profile([ProfilePoint(101.0, 0.5)], "one.csv")
        assert path.read_text() == "cumulative_cost,best_value\n101,0.5\n"
        empty = writer.write_profile([], "empty.csv")
        assert empty.read_text() == ",".join(PROFILE_COLUMNS) + "\n"
        assert read_profile_csv(path)["best_value"].tolist() == [0.5]
        assert [p.name for p in writer.list_files()] == ["empty.csv", "one.csv"]
    print("✓ Profile files written")


def test_trace_file_round_trip():
    problem = make_problem("nonlinear")
    trace = run_reformulated(problem, [1.0, 2.0], SolverConfig(seed=5, max_iterations=40))
    with tempfile.TemporaryDirectory() as tmpdir:
        path = ResultsWriter(tmpdir).write_trace(trace, "trace.csv")
        frame = read_trace_csv(path)
        assert list(pd.read_csv(path, nrows=0).columns) == TRACE_COLUMNS
    assert frame["value"].tolist() == [r.value for r in trace.records]
    assert frame["best_so_far"].tolist() == [r.best_so_far for r in trace.records]
    assert frame["cumulative_cost"].tolist() == [r.cumulative_cost for r in trace.records]
    for x, record in zip(frame["x"], trace.records):
        np.testing.assert_array_equal(x, record.x)
    print("✓ Trace round trip exact")


def test_infinite_values_survive_round_trip():
    trace = _trace([math.inf, 2.0, math.inf], [1.0, 2.0, 3.0])
    with tempfile.TemporaryDirectory() as tmpdir:
        frame = read_trace_csv(ResultsWriter(tmpdir).write_trace(trace, "t.csv"))
    assert frame["value"].tolist() == [math.inf, 2.0, math.inf]


def test_runs_sidecar():
    trace = _trace([3.0, 1.0], [101.0, 202.0])
    trace.metadata.update({"problem": "heavy_mono", "tau": 100.0})
    with tempfile.TemporaryDirectory() as tmpdir:
        writer = ResultsWriter(tmpdir)
        writer.append_run(run_metadata(trace, {"profile": "a.csv"}))
        writer.append_run(run_metadata(_trace([math.inf], [1.0])))
        runs = read_runs(Path(tmpdir) / "runs.jsonl")
        assert runs[0]["problem"] == "heavy_mono"
        assert runs[0]["total_cost"] == 202.0
        assert runs[0]["stop_reason"] == "budget"
        assert runs[1]["value_best"] == "inf"
        writer.reset()
        assert not (Path(tmpdir) / "runs.jsonl").exists()


def test_writer_surfaces_path_on_error():
    with tempfile.TemporaryDirectory() as tmpdir:
        blocker = Path(tmpdir) / "file"
        blocker.write_text("x")
        with pytest.raises(OSError) as ctx:
            ResultsWriter(str(blocker / "sub"))
        assert "file" in str(ctx.value)


def test_first_crossings():
    spec = DESK_TABLES[1]
    states = [IterationState(k, np.array([x]), 0.0, 1.0) for k, x in enumerate([1.0, 1e-3, 1e-7, 1e-7])]
    trace = RunTrace([], states, [True, True, False], states[-1].x, 0.0, 3, StopReason.RADIUS)
    row = first_crossings(spec, trace)
    assert row["k_5e-03"] == 1
    assert row["xhat_5e-03"] == 1e-3
    assert row["k_5e-06"] == 2
    assert row["k_5e-09"] == NEVER
    assert row["returned_k"] == 3
    assert row["returned_xhat"] == 1e-7


class TestBenchmarkRunner:
    def test_solver_settings(self, config_file):
        runner = BenchmarkRunner(config_file)
        config = runner.solver_config_for("dim2", seed=3, max_iterations=None, delta_min=1e-6)
        assert (config.shrink, config.expand) == (0.75, 2.0)
        assert config.seed == 3
        assert config.delta_min == 1e-6
        assert config.max_iterations == 100000
        assert runner.tau_for("heavy_dim2") == 10.0
        assert runner.tau_for("mono") == 0.0
        assert runner.bisection_spec_for("dim2").tolerance == 2.0**-30
        assert runner.bisection_spec_for("heavy_dim2").tolerance == 2.0**-40
        assert runner.bisection_spec_for("mono") is None

    def test_profile_settings(self, config_file):
        runner = BenchmarkRunner(config_file)
        config = runner.profile_config_for("heavy_radial", seed=1)
        assert config.delta_min == 1e-13
        assert (config.shrink, config.expand, config.seed) == (0.5, 1.0, 1)
        assert runner.profile_config_for("heavy_radial", delta_min=1e-8).delta_min == 1e-8

    def test_missing_config(self, tmp_path):
        with pytest.raises(OSError):
            BenchmarkRunner(str(tmp_path / "missing.yaml"))

    def test_solve_problem(self, config_file, tmp_path):
        runner = BenchmarkRunner(config_file)
        stats = runner.solve_problem("mono", [math.pi], seed=1, trace_path=str(tmp_path / "solve.csv"))
        assert abs(stats["x_best"][0]) <= 1e-8
        assert stats["stop_reason"] == "radius"
        assert stats["recovered_dim"] == 2
        assert len(read_trace_csv(tmp_path / "solve.csv")) == stats["evaluations"]

    def test_reproduce_table(self, config_file, tmp_path):
        runner = BenchmarkRunner(config_file)
        stats = runner.reproduce_table(1, output_dir=str(tmp_path / "t1"), seed=0)
        assert stats["successful"] == 8
        summary = stats["summary"]
        assert summary["start"].tolist() == list(DESK_TABLES[1].labels)
        assert len(list((tmp_path / "t1").glob("table1_row*_trace.csv"))) == 8
        assert (tmp_path / "t1" / "table1_summary.csv").exists()

    def test_run_profile(self, config_file, tmp_path):
        runner = BenchmarkRunner(config_file)
        out = tmp_path / "profiles"
        stats = runner.run_profile("heavy_mono", tau=100, budget=2000, starts=2, seed=7, baseline=True, output_dir=str(out))
        names = sorted(Path(f).name for f in stats["files"])
        assert names == [
            "profile_heavy_mono_baseline_1.csv",
            "profile_heavy_mono_baseline_2.csv",
            "profile_heavy_mono_reformulated_1.csv",
            "profile_heavy_mono_reformulated_2.csv",
        ]
        runs = read_runs(out / "runs.jsonl")
        assert len(runs) == 4
        for name in names:
            profile = read_profile_csv(out / name)
            costs = profile["cumulative_cost"].tolist()
            best = profile["best_value"].tolist()
            assert all(b > a for a, b in zip(costs, costs[1:]))
            assert all(b <= a for a, b in zip(best, best[1:]))
            assert costs[-1] <= 2000
        # a second run replaces the sidecar instead of appending to it
        runner.run_profile("heavy_mono", tau=100, budget=500, starts=1, seed=7, output_dir=str(out))
        assert len(read_runs(out / "runs.jsonl")) == 1


if __name__ == "__main__":
    print("=" * 60)
    print("Running Benchmark Tests")
    print("=" * 60)
    print()

    test_cost_model()
    test_convergence_profile_examples()
    test_format_real()
    test_profile_files()
    test_trace_file_round_trip()

    print()
    print("=" * 60)
    print("✓ All tests passed!")
    print("=" * 60)
