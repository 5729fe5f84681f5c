"""
JSON-lines dataset files

Line 1 is the header::

    {"version": 1, "topology": {"kind": "full", "n": 4}, "spec": {...},
     "master_seed": 7, "count": 1000, "run_config": {...}}

and every following line is one record::

    {"seed": ..., "h": [...], "m": [...], "energy": ..., "gap": ...}

Arrays are in canonical order. Floats are written with ``repr`` so every
float64 survives the round trip unchanged.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, ValidationError

from ..core.hamiltonian import CoeffVector
from ..core.states import MeasurementVector
from ..core.topology import Topology
from ..errors import (
    DatasetFormatError,
    DatasetTopologyError,
    DatasetTruncatedError,
    DatasetVersionError,
    DimensionError,
)
from .generator import FORMAT_VERSION, DatasetFile, DatasetRecord
from .sampling import SamplingSpec

PathLike = Union[str, Path]


class DatasetHeader(BaseModel):
    """First line of a dataset file"""

    version: int
    topology: Dict[str, Any]
    spec: SamplingSpec
    master_seed: int = Field(ge=0)
    count: int = Field(ge=0)
    run_config: Optional[Dict[str, Any]] = None


def _dumps(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, separators=(",", ":"), allow_nan=False)


def write_dataset(file: DatasetFile, path: PathLike) -> None:
    """Write header and records, one JSON object per line"""
    header: Dict[str, Any] = {
        "version": file.version,
        "topology": file.topology.descriptor(),
        "spec": file.spec.model_dump(mode="json"),
        "master_seed": file.master_seed,
        "count": file.count,
    }
    if file.run_config is not None:
        header["run_config"] = file.run_config

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(_dumps(header) + "\n")
        for record in file.records:
            line = {
                "seed": record.seed,
                "h": record.h.values.tolist(),
                "m": record.m.values.tolist(),
                "energy": record.energy,
                "gap": record.gap,
            }
            f.write(_dumps(line) + "\n")


def _parse_header(line: str) -> DatasetHeader:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(f"header is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or "version" not in raw:
        raise DatasetFormatError("header has no format version")
    if raw["version"] != FORMAT_VERSION:
        raise DatasetVersionError(
            f"unsupported dataset version {raw['version']!r} (expected {FORMAT_VERSION})"
        )
    try:
        return DatasetHeader.model_validate(raw)
    except ValidationError as exc:
        raise DatasetFormatError(f"invalid header: {exc}") from exc


def _parse_record(raw: Dict[str, Any], topology: Topology, lineno: int) -> DatasetRecord:
    try:
        h = CoeffVector(topology, raw["h"])
        m = MeasurementVector(topology, raw["m"])
        return DatasetRecord(
            seed=int(raw["seed"]),
            h=h,
            m=m,
            energy=float(raw["energy"]),
            gap=float(raw["gap"]),
        )
    except DimensionError as exc:
        raise DatasetTopologyError(f"line {lineno}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise DatasetFormatError(f"line {lineno}: malformed record ({exc})") from exc


def read_dataset(path: PathLike, topology: Optional[Topology] = None) -> DatasetFile:
    """Read and validate a dataset file, optionally against an expected topology"""
    with open(path, encoding="utf-8") as f:
        lines: List[str] = [line for line in f.read().split("\n") if line.strip()]
    if not lines:
        raise DatasetTruncatedError(f"{path}: empty file")

    header = _parse_header(lines[0])
    try:
        file_topology = Topology.from_descriptor(header.topology)
    except (KeyError, ValidationError) as exc:
        raise DatasetFormatError(f"invalid topology descriptor: {exc}") from exc
    if header.spec.topology != file_topology:
        raise DatasetTopologyError(
            f"header topology {file_topology} disagrees with spec {header.spec.topology}"
        )
    if topology is not None and topology != file_topology:
        raise DatasetTopologyError(f"expected {topology}, file holds {file_topology}")

    body = lines[1:]
    if len(body) > header.count:
        raise DatasetFormatError(
            f"header declares {header.count} records, file holds {len(body)}"
        )

    records = []
    for offset, line in enumerate(body):
        lineno = offset + 2
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            if offset == len(body) - 1:
                raise DatasetTruncatedError(f"line {lineno} is cut off") from exc
            raise DatasetFormatError(f"line {lineno} is not valid JSON") from exc
        records.append(_parse_record(raw, file_topology, lineno))

    if len(records) < header.count:
        raise DatasetTruncatedError(
            f"header declares {header.count} records, file holds {len(records)}"
        )
    return DatasetFile(
        spec=header.spec,
        master_seed=header.master_seed,
        records=tuple(records),
        version=header.version,
        run_config=header.run_config,
    )
