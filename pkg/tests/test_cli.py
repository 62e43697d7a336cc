"""
Tests for the command-line interface.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.benchmark.results_writer import read_profile_csv, read_runs, read_trace_csv
from src.benchmark.runner import BenchmarkRunner
from src.cli.main import EXIT_INFEASIBLE, EXIT_OK, EXIT_ORACLE, EXIT_USAGE, SEED_ENV, main, parse_start
from src.pof.errors import BracketError
from src.problems.components import heavy_nonlinear_f


@pytest.fixture(autouse=True)
def no_seed_env(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)


def _x_best(output: str) -> np.ndarray:
    line = next(l for l in output.splitlines() if l.startswith("x_best:"))
    return np.array([float(v) for v in line.split(":", 1)[1].split(",")])


def test_list_problems(capsys):
    assert main(["list-problems"]) == EXIT_OK
    out = capsys.readouterr().out
    for pid in ("mono", "radial", "nonlinear", "dim2", "heavy_mono", "heavy_radial", "heavy_nonlinear", "heavy_dim2"):
        assert pid in out
    print("✓ list-problems working")


def test_unknown_problem_exits_with_usage(capsys):
    with pytest.raises(SystemExit) as ctx:
        main(["solve", "--problem", "bogus"])
    assert ctx.value.code == EXIT_USAGE
    assert "heavy_dim2" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--problem", "mono", "--lambda", "1.5"],
        ["solve", "--problem", "mono", "--upsilon", "0.5"],
        ["solve", "--problem", "mono", "--tol", "0"],
        ["solve", "--problem", "mono", "--start", "1,2"],
        ["solve", "--problem", "mono", "--start", "auto:9"],
        ["solve", "--problem", "mono", "--start", "abc"],
        ["profile", "--problem", "heavy_mono", "--starts", "0"],
        ["profile", "--problem", "heavy_mono", "--tau", "-1"],
        ["reproduce", "--table", "5"],
    ],
)
def test_invalid_arguments(argv):
    with pytest.raises(SystemExit) as ctx:
        main(argv)
    assert ctx.value.code == EXIT_USAGE


def test_solve_mono(config_file, tmp_path, capsys):
    out = tmp_path / "mono.csv"
    code = main(["--config", str(config_file), "solve", "--problem", "mono", "--start", "3.14159265", "--seed", "1", "--out", str(out)])
    assert code == EXIT_OK
    x_best = _x_best(capsys.readouterr().out)
    assert abs(x_best[0]) <= 1e-8
    assert len(read_trace_csv(out)) > 1


def test_solve_nonlinear(config_file, capsys):
    code = main(["--config", str(config_file), "solve", "--problem", "nonlinear", "--start", "2.718281828"])
    assert code == EXIT_OK
    x_best = _x_best(capsys.readouterr().out)
    assert 4.0 - 1e-7 <= x_best[0] <= 4.0


def test_solve_infeasible_start(config_file, capsys):
    code = main(["--config", str(config_file), "solve", "--problem", "radial", "--start", "-1"])
    assert code == EXIT_INFEASIBLE
    assert "Infeasible" in capsys.readouterr().err


def test_solve_missing_config(tmp_path):
    code = main(["--config", str(tmp_path / "missing.yaml"), "solve", "--problem", "mono"])
    assert code == 4


def test_oracle_failure_exit_code(config_file, monkeypatch, capsys, caplog):
    def no_bracket(self, problem_id, x0, **kwargs):
        raise BracketError("g_3^-1(1e+308): no bracket after 2000 doublings")

    monkeypatch.setattr(BenchmarkRunner, "solve_problem", no_bracket)
    with caplog.at_level("ERROR"):
        code = main(["--config", str(config_file), "solve", "--problem", "heavy_dim2", "--start", "auto:1"])
    assert code == EXIT_ORACLE
    assert "Oracle failure" in capsys.readouterr().err
    assert any("oracle failure" in r.getMessage() for r in caplog.records)


def test_seed_environment_overrides_flag(config_file, tmp_path, monkeypatch):
    monkeypatch.setenv(SEED_ENV, "5")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["--config", str(config_file), "solve", "--problem", "dim2", "--max_iters", "20", "--seed", "1", "--out", str(a)]) == EXIT_OK
    assert main(["--config", str(config_file), "solve", "--problem", "dim2", "--max_iters", "20", "--seed", "2", "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_malformed_seed_environment(monkeypatch):
    monkeypatch.setenv(SEED_ENV, "abc")
    with pytest.raises(SystemExit) as ctx:
        main(["solve", "--problem", "mono"])
    assert ctx.value.code == EXIT_USAGE


def test_parse_start():
    np.testing.assert_array_equal(parse_start("1.5", "mono", 0), [1.5])
    np.testing.assert_array_equal(parse_start("auto:3", "mono", 0), [math.sqrt(2.0)])
    np.testing.assert_array_equal(parse_start("-2,2", "dim2", 0), [-2.0, 2.0])
    expected = heavy_nonlinear_f(np.arange(1, 101) / 100.0)
    np.testing.assert_array_equal(parse_start("auto:1", "heavy_nonlinear", 0), [expected])
    heavy = parse_start("auto:2", "heavy_dim2", 3)
    assert heavy.shape == (10,)
    with pytest.raises(ValueError):
        parse_start("auto:0", "mono", 0)
    with pytest.raises(ValueError):
        parse_start("1,inf", "dim2", 0)


def test_profile_command(config_file, tmp_path, capsys):
    out = tmp_path / "profiles"
    code = main(
        [
            "--config", str(config_file), "profile", "--problem", "heavy_radial",
            "--tau", "0", "--budget", "1000", "--starts", "1", "--seed", "1", "--out_dir", str(out),
        ]
    )
    assert code == EXIT_OK
    assert "1 profile files written" in capsys.readouterr().out
    profile = read_profile_csv(out / "profile_heavy_radial_reformulated_1.csv")
    assert profile["best_value"].iloc[-1] <= 1e-6
    assert len(read_runs(out / "runs.jsonl")) == 1


def test_reproduce_command(config_file, tmp_path, capsys):
    out = tmp_path / "table2"
    assert main(["--config", str(config_file), "reproduce", "--table", "2", "--out_dir", str(out)]) == EXIT_OK
    assert "8/8 rows" in capsys.readouterr().out
    assert (out / "table2_summary.csv").exists()


def test_setup_script_reads_directories_from_config():
    script = (Path(__file__).parent.parent / "setup.sh").read_text(encoding="utf-8")
    assert "yaml.safe_load" in script
    assert 'mkdir -p "$OUTPUT_DIR" "$LOG_DIR"' in script
    assert "mkdir -p outputs logs" not in script
    assert "python check_setup.py" in script
    assert 'pytest -m "not slow"' in script


if __name__ == "__main__":
    print("=" * 60)
    print("Running CLI Tests")
    print("=" * 60)
    print()

    sys.exit(pytest.main([__file__, "-v"]))
