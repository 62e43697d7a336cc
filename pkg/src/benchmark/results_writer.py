"""
CSV and JSON-lines storage of benchmark results.

Floats are written in their shortest round-trip form, integral values
without a decimal part and infinities as `inf` / `-inf`, so re-reading a
file gives back the exact in-memory values.
"""

import json
import logging
import math
import threading
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..solver.cdsm import RunTrace
from .harness import ProfilePoint

TRACE_COLUMNS = ["eval_index", "step_kind", "cumulative_cost", "value", "best_so_far", "x"]
PROFILE_COLUMNS = ["cumulative_cost", "best_value"]
RUNS_FILE = "runs.jsonl"


def format_real(value: float) -> str:
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value.is_integer() and abs(value) < 2**53:
        return str(int(value))
    return repr(value)


def format_vector(values: Iterable[float]) -> str:
    return ";".join(format_real(v) for v in values)


def parse_vector(text: str) -> np.ndarray:
    return np.array([float(v) for v in str(text).split(";")])


def _json_safe(value):
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (float, np.floating)):
        return format_real(value) if not math.isfinite(value) else float(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


class ResultsWriter:
    """Writes traces, profiles, summaries and the run sidecar under one directory."""

    def __init__(self, output_dir: str = "outputs"):
        """
        Args:
            output_dir: Directory receiving every file; created if missing
        """
        self.output_dir = Path(output_dir)
        self.logger = logging.getLogger(__name__)
        self._locks: Dict[Path, threading.Lock] = {}
        self._guard = threading.Lock()
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise OSError(f"cannot create output directory {self.output_dir}: {e}") from e

    def _lock(self, path: Path) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(path, threading.Lock())

    def _write_frame(self, frame: pd.DataFrame, name: str) -> Path:
        path = self.output_dir / name
        with self._lock(path):
            try:
                frame.to_csv(path, index=False, lineterminator="\n")
            except OSError as e:
                raise OSError(f"cannot write {path}: {e}") from e
        self.logger.debug(f"Wrote {len(frame)} rows to {path}")
        return path

    def write_trace(self, trace: RunTrace, name: str) -> Path:
        """
        One row per evaluation.

        Returns:
            Path of the written file
        """
        frame = pd.DataFrame(
            [
                [
                    str(r.eval_index),
                    r.step_kind.value,
                    format_real(r.cumulative_cost),
                    format_real(r.value),
                    format_real(r.best_so_far),
                    format_vector(r.x),
                ]
                for r in trace.records
            ],
            columns=TRACE_COLUMNS,
        )
        return self._write_frame(frame, name)

    def write_profile(self, profile: Sequence[ProfilePoint], name: str) -> Path:
        frame = pd.DataFrame(
            [[format_real(p.cumulative_cost), format_real(p.best_value)] for p in profile],
            columns=PROFILE_COLUMNS,
        )
        return self._write_frame(frame, name)

    def write_summary(self, summary: pd.DataFrame, name: str) -> Path:
        frame = summary.copy()
        for column in frame.columns:
            frame[column] = [format_real(v) if isinstance(v, (float, np.floating)) else v for v in frame[column]]
        return self._write_frame(frame, name)

    def append_run(self, metadata: Dict, name: str = RUNS_FILE) -> Path:
        """Append one JSON object to the run sidecar."""
        path = self.output_dir / name
        line = json.dumps(_json_safe(metadata), sort_keys=True)
        with self._lock(path):
            try:
                with open(path, "a", encoding="utf-8") as f:
                    f.write(line + "\n")
            except OSError as e:
                raise OSError(f"cannot append to {path}: {e}") from e
        return path

    def reset(self, name: str = RUNS_FILE):
        """Remove a previous file so appends start from scratch."""
        path = self.output_dir / name
        with self._lock(path):
            path.unlink(missing_ok=True)

    def list_files(self, pattern: str = "*.csv") -> List[Path]:
        return sorted(self.output_dir.glob(pattern))


def run_metadata(trace: RunTrace, extra: Optional[Dict] = None) -> Dict:
    """Sidecar entry of one run."""
    metadata = dict(trace.metadata)
    metadata.update(
        {
            "stop_reason": trace.stop_reason.value,
            "iterations": trace.iterations,
            "evaluations": trace.evaluations,
            "total_cost": trace.total_cost,
            "value_best": trace.value_best,
            "x_best": trace.x_best.tolist(),
        }
    )
    if extra:
        metadata.update(extra)
    return metadata


def _read(path, columns: List[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, float_precision="round_trip", dtype=str, keep_default_na=False)
    except OSError as e:
        raise OSError(f"cannot read {path}: {e}") from e
    if list(frame.columns) != columns:
        raise ValueError(f"{path}: unexpected header {list(frame.columns)}")
    return frame


def read_trace_csv(path) -> pd.DataFrame:
    """Trace file back as a frame with float columns and x as arrays."""
    frame = _read(path, TRACE_COLUMNS)
    frame["eval_index"] = frame["eval_index"].astype(int)
    for column in ("cumulative_cost", "value", "best_so_far"):
        frame[column] = frame[column].astype(float)
    frame["x"] = [parse_vector(v) for v in frame["x"]]
    return frame


def read_profile_csv(path) -> pd.DataFrame:
    frame = _read(path, PROFILE_COLUMNS)
    for column in PROFILE_COLUMNS:
        frame[column] = frame[column].astype(float)
    return frame


def read_runs(path) -> List[Dict]:
    with open(path, "r", encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]
