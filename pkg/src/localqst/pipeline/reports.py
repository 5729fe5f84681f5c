"""
CSV and JSON report files

Every CSV starts with one comment line ``# run_config={...}`` carrying the
resolved configuration; ``read_csv`` skips it and ``read_run_config``
returns it.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd

from ..nn.trainer import EpochStats
from .evaluation import EvalReport, NoiseLevelReport
from .sweep import SweepTable

PathLike = Union[str, Path]

RECORD_COLUMNS = ["record_index", "f1", "f2", "cos_angle", "gap", "failed"]
_CONFIG_PREFIX = "# run_config="


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_csv(frame: pd.DataFrame, path: PathLike, run_config: Optional[Dict[str, Any]]) -> None:
    path = _prepare(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(_CONFIG_PREFIX + json.dumps(run_config or {}, sort_keys=True) + "\n")
        frame.to_csv(f, index=False)


def read_csv(path: PathLike) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")


def read_run_config(path: PathLike) -> Dict[str, Any]:
    with open(path, encoding="utf-8") as f:
        first = f.readline().rstrip("\n")
    if not first.startswith(_CONFIG_PREFIX):
        raise ValueError(f"{path} has no run_config line")
    return json.loads(first[len(_CONFIG_PREFIX) :])


def records_frame(report: EvalReport) -> pd.DataFrame:
    """One row per test record"""
    return pd.DataFrame(
        [r.model_dump() for r in report.records], columns=RECORD_COLUMNS
    )


def _strict_json(value: Any) -> Any:
    """NaN and infinities become null"""
    if isinstance(value, dict):
        return {key: _strict_json(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_strict_json(item) for item in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_eval_reports(
    report: EvalReport,
    csv_path: PathLike,
    json_path: PathLike,
    run_config: Optional[Dict[str, Any]] = None,
) -> None:
    """Per-record CSV plus aggregate JSON"""
    write_csv(records_frame(report), csv_path, run_config)
    payload = _strict_json({"run_config": run_config or {}, **report.aggregate()})
    with open(_prepare(json_path), "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True, allow_nan=False)
        f.write("\n")


def history_frame(history: Sequence[EpochStats]) -> pd.DataFrame:
    return pd.DataFrame(
        [stats.model_dump() for stats in history],
        columns=["epoch", "train_loss", "val_loss"],
    )


def sweep_frame(table: SweepTable) -> pd.DataFrame:
    """
    Table layout: one row per (train_size, batch_size), mean f1/f2 per epoch

    Columns are ``train_size, batch_size, epoch_<e>_f1, epoch_<e>_f2, ...`` in
    grid order.
    """
    rows: Dict[tuple, Dict[str, Any]] = {}
    epoch_order: List[int] = []
    for cell in table.cells:
        key = (cell.train_size, cell.batch_size)
        row = rows.setdefault(key, {"train_size": cell.train_size, "batch_size": cell.batch_size})
        row[f"epoch_{cell.epochs}_f1"] = cell.report.f1.mean
        row[f"epoch_{cell.epochs}_f2"] = cell.report.f2.mean
        if cell.epochs not in epoch_order:
            epoch_order.append(cell.epochs)
    columns = ["train_size", "batch_size"]
    for epochs in epoch_order:
        columns += [f"epoch_{epochs}_f1", f"epoch_{epochs}_f2"]
    return pd.DataFrame(list(rows.values()), columns=columns)


def noise_frame(levels: Sequence[NoiseLevelReport]) -> pd.DataFrame:
    """Fidelity degradation curve, one row per sigma"""
    return pd.DataFrame(
        [
            {
                "sigma": level.sigma,
                "f1_mean": level.report.f1.mean,
                "f1_std": level.report.f1.std,
                "f2_mean": level.report.f2.mean,
                "f2_std": level.report.f2.std,
                "n_failed": level.report.n_failed,
            }
            for level in levels
        ],
        columns=["sigma", "f1_mean", "f1_std", "f2_mean", "f2_std", "n_failed"],
    )
