"""
Command-line interface.

    solve          solve the reformulation of one problem from one start
    reproduce      rerun the eight starts of a table and write its summary
    profile        multistart convergence profiles (optionally against the
                   full-space baseline)
    list-problems  print the catalog

Exit codes: 0 success, 2 invalid arguments, 3 infeasible start, 4 I/O error,
5 oracle failure (a dichotomic search found no bracket).
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

import numpy as np
from dotenv import load_dotenv

from ..pof.errors import InfeasibleStartError, OracleError
from ..problems.catalog import DESK_STARTS, DESK_TABLES, PROBLEM_IDS, list_problems, make_problem, parse_problem_id
from ..benchmark.harness import generate_starts
from ..benchmark.runner import BenchmarkRunner

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4
EXIT_ORACLE = 5

SEED_ENV = "PARTI_DFO_SEED"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parti-dfo", description="Partitioned derivative-free optimization with the covering DSM"
    )
    parser.add_argument("--config", default="config/config.yaml", help="YAML configuration file")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="solve one problem from one start")
    solve.add_argument("--problem", required=True, choices=PROBLEM_IDS)
    solve.add_argument(
        "--start",
        default="auto:1",
        help="comma-separated index components, or auto:<i> for the i-th hard-coded start",
    )
    solve.add_argument("--seed", type=int)
    solve.add_argument("--lambda", dest="shrink", type=float, help="poll radius shrinking factor")
    solve.add_argument("--upsilon", dest="expand", type=float, help="poll radius expanding factor")
    solve.add_argument("--delta0", type=float)
    solve.add_argument("--tol", type=float, help="stop once the poll radius is below this value")
    solve.add_argument("--max_iters", type=int)
    solve.add_argument("--out", help="trace CSV path")

    reproduce = commands.add_parser("reproduce", help="rerun the eight starts of a table")
    reproduce.add_argument("--table", type=int, required=True, choices=sorted(DESK_TABLES))
    reproduce.add_argument("--out_dir")
    reproduce.add_argument("--seed", type=int)

    profile = commands.add_parser("profile", help="multistart convergence profiles")
    profile.add_argument("--problem", required=True, choices=PROBLEM_IDS)
    profile.add_argument("--tau", type=float)
    profile.add_argument("--budget", type=float)
    profile.add_argument("--starts", type=int)
    profile.add_argument("--seed", type=int)
    profile.add_argument("--baseline", action="store_true", help="also run the full-space DSM")
    profile.add_argument("--out_dir")

    commands.add_parser("list-problems", help="print the problem catalog")
    return parser


def parse_start(text: str, problem_id, seed: int) -> np.ndarray:
    """
    Index start from the --start flag.

    auto:<i> picks the i-th hard-coded start (1-based) of a desk problem, or
    chi of the i-th generated full-space start of a heavy problem.

    Raises:
        ValueError: on malformed input
    """
    pid = parse_problem_id(problem_id)
    problem = make_problem(pid)
    if text.startswith("auto:"):
        try:
            i = int(text[len("auto:") :])
        except ValueError:
            raise ValueError(f"malformed start '{text}', expected auto:<index>")
        if i < 1:
            raise ValueError("auto start indices count from 1")
        if pid in DESK_STARTS:
            starts = DESK_STARTS[pid]
            if i > len(starts):
                raise ValueError(f"{pid.value} has {len(starts)} hard-coded starts, got auto:{i}")
            return np.array(starts[i - 1], dtype=float)
        y0 = generate_starts(pid, i, seed)[i - 1]
        return np.asarray(problem.chi(y0), dtype=float).reshape(-1)
    try:
        x0 = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ValueError(f"malformed start '{text}', expected comma-separated numbers")
    if x0.size != problem.dim_x:
        raise ValueError(f"{pid.value} expects {problem.dim_x} index components, got {x0.size}")
    if not np.all(np.isfinite(x0)):
        raise ValueError("start components must be finite")
    return x0


def _validate(parser: argparse.ArgumentParser, args: argparse.Namespace):
    """Reject out-of-range flags before anything runs."""
    if args.command == "solve":
        if args.shrink is not None and not 0.0 < args.shrink < 1.0:
            parser.error("--lambda must lie in ]0, 1[")
        if args.expand is not None and args.expand < 1.0:
            parser.error("--upsilon must be at least 1")
        if args.delta0 is not None and args.delta0 <= 0:
            parser.error("--delta0 must be positive")
        if args.tol is not None and args.tol <= 0:
            parser.error("--tol must be positive")
        if args.max_iters is not None and args.max_iters < 1:
            parser.error("--max_iters must be at least 1")
    if args.command == "profile":
        if args.starts is not None and args.starts < 1:
            parser.error("--starts must be at least 1")
        if args.tau is not None and args.tau < 0:
            parser.error("--tau must be nonnegative")
        if args.budget is not None and args.budget <= 0:
            parser.error("--budget must be positive")


def _apply_seed_env(parser: argparse.ArgumentParser, args: argparse.Namespace):
    value = os.environ.get(SEED_ENV)
    if value is None or not hasattr(args, "seed"):
        return
    try:
        args.seed = int(value)
    except ValueError:
        parser.error(f"{SEED_ENV} must be an integer, got '{value}'")


def cmd_solve(runner: BenchmarkRunner, args: argparse.Namespace, x0: np.ndarray) -> int:
    stats = runner.solve_problem(
        args.problem,
        x0,
        seed=args.seed,
        trace_path=args.out,
        shrink=args.shrink,
        expand=args.expand,
        delta0=args.delta0,
        delta_min=args.tol,
        max_iterations=args.max_iters,
    )
    print(f"problem:        {stats['problem']}")
    print(f"x_best:         {', '.join(repr(v) for v in stats['x_best'])}")
    print(f"Phi(x_best):    {stats['value_best']!r}")
    print(f"iterations:     {stats['iterations']}")
    print(f"stop reason:    {stats['stop_reason']}")
    print(f"recovered dim:  {stats['recovered_dim']}")
    print(f"trace:          {stats['trace_path']}")
    return EXIT_OK


def cmd_reproduce(runner: BenchmarkRunner, args: argparse.Namespace) -> int:
    stats = runner.reproduce_table(args.table, args.out_dir, args.seed)
    print(f"Table {stats['table']} ({stats['problem']}): {stats['successful']}/{stats['rows']} rows")
    print(stats["summary"].to_string(index=False))
    print(f"summary: {stats['summary_path']}")
    return EXIT_OK


def cmd_profile(runner: BenchmarkRunner, args: argparse.Namespace) -> int:
    stats = runner.run_profile(
        args.problem,
        tau=args.tau,
        budget=args.budget,
        starts=args.starts,
        seed=args.seed,
        baseline=args.baseline,
        output_dir=args.out_dir,
    )
    print(f"{stats['problem']}: tau={stats['tau']:g}, budget={stats['budget']:g}")
    for method in ("reformulated", "baseline"):
        if stats[method]:
            print(f"  {method:13s} final values: {', '.join(f'{v:.3e}' for v in stats[method])}")
    print(f"{len(stats['files'])} profile files written")
    return EXIT_OK


def cmd_list_problems() -> int:
    for row in list_problems():
        optimum = "none" if row["optimum_x"] is None else f"x*={row['optimum_x']}, value={row['optimum_value']}"
        if row["attained"] is False:
            optimum += " (generalized)"
        print(
            f"{row['id']:16s} dim_Y={row['dim_y']:<4d} dim_X={row['dim_x']:<3d} "
            f"X box {row['index_box']:22s} {optimum}"
        )
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    _apply_seed_env(parser, args)

    if args.command == "list-problems":
        return cmd_list_problems()

    x0 = None
    if args.command == "solve":
        try:
            x0 = parse_start(args.start, args.problem, args.seed or 0)
        except ValueError as e:
            parser.error(str(e))

    try:
        runner = BenchmarkRunner(args.config)
        if args.command == "solve":
            return cmd_solve(runner, args, x0)
        if args.command == "reproduce":
            return cmd_reproduce(runner, args)
        return cmd_profile(runner, args)
    except InfeasibleStartError as e:
        print(f"✗ Infeasible start: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as e:
        print(f"✗ I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except OracleError as e:
        logger.error(f"{args.command}: oracle failure: {e}")
        print(f"✗ Oracle failure: {e}", file=sys.stderr)
        return EXIT_ORACLE
    except ValueError as e:
        print(f"✗ Invalid settings: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
