"""Result persistence.

Writes to the output directory:
- records.csv: one trial per row
- summary.csv: one (phi, condition) group per row
- result.json: the full ResultSet, reloadable with :func:`load_result`
- calibration_curves.jsonl, closed_loop.jsonl, zne_points.jsonl: audit trails
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path

import jsonlines
import pandas as pd

from aurora.campaign.runner import RECORD_COLUMNS, ResultSet
from aurora.control.calibration import CalibrationResult
from aurora.errors import ResultsIOError
from aurora.eval.baseline_comparison import GroupSummary

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.10g"
SUMMARY_COLUMNS = [
    "phi", "condition", "n", "mean_ae", "std_ae", "mean_mse", "reduction_pct",
    "ci_lo", "ci_hi", "sign_p",
]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def summary_frame(summaries: list[GroupSummary] | tuple[GroupSummary, ...]) -> pd.DataFrame:
    """Table-shaped summary rows; ``reduction_pct`` is the AE-based reduction."""
    rows = [
        [
            _fmt(s.phi),
            s.condition,
            _fmt(s.ae.n),
            _fmt(s.ae.mean),
            _fmt(s.ae.std),
            _fmt(s.mse.mean),
            _fmt(s.reduction_ae_pct),
            _fmt(s.ci.lo if s.ci else None),
            _fmt(s.ci.hi if s.ci else None),
            _fmt(s.sign_p),
        ]
        for s in summaries
    ]
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def write_summary(summaries, output_path: str | Path) -> Path:
    output_path = Path(output_path)
    try:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        summary_frame(summaries).to_csv(output_path, index=False, lineterminator="\n")
    except OSError as e:
        raise ResultsIOError(f"cannot write {output_path}: {e}") from e
    return output_path


def _write_jsonl(path: Path, rows: list[dict]) -> None:
    with jsonlines.open(path, mode="w") as writer:
        writer.write_all(rows)


def _curve_rows(calibration: CalibrationResult) -> list[dict]:
    rows = []
    for i, (delta_phi, mean_j) in enumerate(calibration.grid):
        row = {"delta_phi": delta_phi, "mean_objective": mean_j}
        row["per_phi"] = {
            repr(phi): curve[i] for phi, curve in calibration.per_phi_curves.items()
        }
        rows.append(row)
    return rows


def write_calibration(calibration: CalibrationResult, output_dir: str | Path) -> list[Path]:
    """calibration.json plus one JSONL row per grid offset."""
    output_dir = Path(output_dir)
    json_path = output_dir / "calibration.json"
    curves_path = output_dir / "calibration_curves.jsonl"
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
        with open(json_path, "w") as f:
            json.dump(calibration.to_dict(), f, indent=2, allow_nan=False)
            f.write("\n")
        _write_jsonl(curves_path, _curve_rows(calibration))
    except OSError as e:
        raise ResultsIOError(f"cannot write calibration to {output_dir}: {e}") from e
    return [json_path, curves_path]


def write_results(rs: ResultSet, output_dir: str | Path) -> list[Path]:
    """Write every result file for ``rs`` and return their paths."""
    output_dir = Path(output_dir)
    paths = {
        "records": output_dir / "records.csv",
        "summary": output_dir / "summary.csv",
        "result": output_dir / "result.json",
        "curves": output_dir / "calibration_curves.jsonl",
        "closed_loop": output_dir / "closed_loop.jsonl",
        "zne": output_dir / "zne_points.jsonl",
    }
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
        rs.records_frame().to_csv(
            paths["records"], index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
        )
        write_summary(rs.summaries, paths["summary"])
        with open(paths["result"], "w") as f:
            json.dump(rs.to_dict(), f, indent=2, allow_nan=False)
            f.write("\n")
        _write_jsonl(paths["curves"], _curve_rows(rs.calibration))
        _write_jsonl(paths["closed_loop"], [t.to_dict() for t in rs.closed_loop])
        _write_jsonl(paths["zne"], [p.to_dict() for p in rs.zne_points])
    except OSError as e:
        raise ResultsIOError(f"cannot write results to {output_dir}: {e}") from e

    logger.info("Wrote %d result files to %s", len(paths), output_dir)
    return list(paths.values())


def load_result(path: str | Path) -> ResultSet:
    """Reload a ResultSet from result.json (or a directory holding one)."""
    path = Path(path)
    if path.is_dir():
        path = path / "result.json"
    try:
        with open(path) as f:
            return ResultSet.from_dict(json.load(f))
    except OSError as e:
        raise ResultsIOError(f"cannot read {path}: {e}") from e
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise ResultsIOError(f"{path} is not a valid result file: {e}") from e


def read_records(path: str | Path) -> pd.DataFrame:
    """Load records.csv and recompute ae and mse from z_meas and phi."""
    path = Path(path)
    if path.is_dir():
        path = path / "records.csv"
    try:
        df = pd.read_csv(path, dtype={"condition": str})
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ResultsIOError(f"cannot read {path}: {e}") from e
    missing = [c for c in RECORD_COLUMNS if c not in df.columns]
    if missing:
        raise ResultsIOError(f"{path} lacks columns: {', '.join(missing)}")

    df["ae"] = (df["z_meas"] - df["phi"].map(math.cos)).abs()
    df["mse"] = df["ae"] * df["ae"]
    df["preliminary"] = df["preliminary"].astype(bool)
    return df
