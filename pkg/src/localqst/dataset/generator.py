"""
Dataset generation: random Hamiltonian -> ground state -> local measurements
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ..core.hamiltonian import CoeffVector, build_hamiltonian
from ..core.states import MeasurementVector, ground_state, measure_local
from ..core.topology import Topology
from ..errors import DegenerateGroundStateError, GenerationFailedError
from ..log import get_logger
from ..seeding import mix_seed, rng
from .sampling import SamplingSpec, sample_coeffs

log = get_logger(__name__)

FORMAT_VERSION = 1

# stream index for split shuffles, far away from any record index
_SPLIT_STREAM = 1 << 62


@dataclass(frozen=True, eq=False)
class DatasetRecord:
    """One (h, M) training pair plus the spectrum facts of its Hamiltonian"""

    seed: int
    h: CoeffVector
    m: MeasurementVector
    energy: float
    gap: float


@dataclass(frozen=True, eq=False)
class DatasetFile:
    """Header fields plus records, as stored on disk"""

    spec: SamplingSpec
    master_seed: int
    records: Tuple[DatasetRecord, ...]
    version: int = FORMAT_VERSION
    run_config: Optional[Dict[str, Any]] = None

    @property
    def topology(self) -> Topology:
        return self.spec.topology

    @property
    def count(self) -> int:
        return len(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def head(self, size: int) -> "DatasetFile":
        """Prefix of the first ``size`` records"""
        return replace(self, records=self.records[:size])

    def inputs(self) -> np.ndarray:
        return records_to_arrays(self.records)[0]

    def targets(self) -> np.ndarray:
        return records_to_arrays(self.records)[1]


def records_to_arrays(records: Sequence[DatasetRecord]) -> Tuple[np.ndarray, np.ndarray]:
    """Stack measurement inputs and coefficient targets row-wise"""
    if not records:
        raise ValueError("no records")
    inputs = np.stack([record.m.values for record in records])
    targets = np.stack([record.h.values for record in records])
    return inputs, targets


def generate_record(spec: SamplingSpec, record_seed: int) -> DatasetRecord:
    """
    Sample h, solve for its ground state and measure it

    Degenerate draws are resampled with seeds mix(record_seed, attempt); the
    stored seed is always ``record_seed`` so the record regenerates from it.
    """
    topology = spec.topology
    for attempt in range(spec.max_resamples):
        seed = record_seed if attempt == 0 else mix_seed(record_seed, attempt)
        h = sample_coeffs(spec, seed)
        try:
            state = ground_state(build_hamiltonian(h), spec.gap_tol)
        except DegenerateGroundStateError as exc:
            log.debug("degenerate_draw", seed=record_seed, attempt=attempt, gap=exc.gap)
            continue
        return DatasetRecord(
            seed=record_seed,
            h=h,
            m=measure_local(state, topology),
            energy=state.energy,
            gap=state.gap,
        )
    raise GenerationFailedError(record_seed, attempts=spec.max_resamples)


def _generate_indexed(spec: SamplingSpec, master_seed: int, index: int) -> DatasetRecord:
    seed = mix_seed(master_seed, index)
    try:
        return generate_record(spec, seed)
    except GenerationFailedError as exc:
        raise GenerationFailedError(exc.seed, index, exc.attempts) from None


def generate_dataset(
    spec: SamplingSpec,
    n_records: int,
    master_seed: int,
    workers: int = 1,
    run_config: Optional[Dict[str, Any]] = None,
) -> DatasetFile:
    """Generate ``n_records`` records; output does not depend on ``workers``"""
    if n_records < 1:
        raise ValueError(f"n_records must be at least 1, got {n_records}")
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")

    task = partial(_generate_indexed, spec, master_seed)
    if workers == 1:
        records = tuple(task(i) for i in range(n_records))
    else:
        chunksize = max(1, n_records // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = tuple(pool.map(task, range(n_records), chunksize=chunksize))

    log.info(
        "dataset_generated",
        topology=str(spec.topology),
        count=n_records,
        mean_gap=float(np.mean([record.gap for record in records])),
        workers=workers,
    )
    return DatasetFile(
        spec=spec, master_seed=master_seed, records=records, run_config=run_config
    )


def shuffled_split(
    count: int, train_fraction: float, seed: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Seeded permutation of range(count) cut at floor(count * fraction)"""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    order = rng(seed).permutation(count)
    cut = math.floor(count * train_fraction)
    return order[:cut], order[cut:]


def split_dataset(
    file: DatasetFile, train_fraction: float
) -> Tuple[DatasetFile, DatasetFile]:
    """Deterministic train/validation partition keyed on the file's master seed"""
    first, second = shuffled_split(
        file.count, train_fraction, mix_seed(file.master_seed, _SPLIT_STREAM)
    )
    return (
        replace(file, records=tuple(file.records[i] for i in first)),
        replace(file, records=tuple(file.records[i] for i in second)),
    )
