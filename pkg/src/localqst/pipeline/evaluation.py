"""
State reconstruction and fidelity evaluation of trained models
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, model_validator

from ..core.fidelity import fidelity_f1, fidelity_f2
from ..core.hamiltonian import CoeffVector, build_hamiltonian
from ..core.states import DEFAULT_GAP_TOL, PureState, ground_state
from ..dataset.generator import DatasetRecord
from ..dataset.sampling import add_measurement_noise
from ..errors import DegenerateGroundStateError, DimensionError, NonFiniteError
from ..log import get_logger
from ..nn.losses import cosine_similarity
from ..nn.network import ModelParams, predict_batch
from ..seeding import mix_seed

log = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class Reconstruction:
    """Ground state of a predicted Hamiltonian, or a flagged failure"""

    state: Optional[PureState]
    gap: float

    @property
    def failed(self) -> bool:
        return self.state is None

    @property
    def rho(self) -> Optional[np.ndarray]:
        return None if self.state is None else self.state.density_matrix()


def reconstruct_state(h_pred: CoeffVector, gap_tol: float = DEFAULT_GAP_TOL) -> Reconstruction:
    """rho_nn = |psi><psi| for the ground state of H(h_pred)"""
    if not np.all(np.isfinite(h_pred.values)):
        raise NonFiniteError("predicted coefficients are not finite")
    try:
        state = ground_state(build_hamiltonian(h_pred), gap_tol)
    except DegenerateGroundStateError as exc:
        return Reconstruction(state=None, gap=exc.gap)
    return Reconstruction(state=state, gap=state.gap)


class RecordEval(BaseModel):
    """Metrics of one test record; fidelities are None when reconstruction failed"""

    record_index: int
    f1: Optional[float] = None
    f2: Optional[float] = None
    cos_angle: float
    gap: float
    failed: bool = False


class FidelityStats(BaseModel):
    mean: float
    max: float
    min: float
    std: float

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "FidelityStats":
        """Aggregates with the population standard deviation; NaN when empty"""
        if not values:
            nan = float("nan")
            return cls(mean=nan, max=nan, min=nan, std=nan)
        array = np.asarray(values, dtype=np.float64)
        return cls(
            mean=float(np.mean(array)),
            max=float(np.max(array)),
            min=float(np.min(array)),
            std=float(np.std(array)),
        )


class EvalReport(BaseModel):
    """Per-record metrics plus the aggregates recomputed from them"""

    records: List[RecordEval]
    f1: FidelityStats
    f2: FidelityStats
    n_records: int
    n_failed: int

    @model_validator(mode="after")
    def _check_counts(self) -> "EvalReport":
        if self.n_records != len(self.records):
            raise ValueError("n_records disagrees with the per-record entries")
        if self.n_failed != sum(r.failed for r in self.records):
            raise ValueError("n_failed disagrees with the per-record entries")
        return self

    @classmethod
    def from_records(cls, records: Sequence[RecordEval]) -> "EvalReport":
        ok = [r for r in records if not r.failed]
        return cls(
            records=list(records),
            f1=FidelityStats.from_values([r.f1 for r in ok if r.f1 is not None]),
            f2=FidelityStats.from_values([r.f2 for r in ok if r.f2 is not None]),
            n_records=len(records),
            n_failed=len(records) - len(ok),
        )

    def aggregate(self) -> dict:
        """JSON aggregate block: max, min, std and mean for f1 and f2"""
        return {
            "f1": self.f1.model_dump(),
            "f2": self.f2.model_dump(),
            "n_records": self.n_records,
            "n_failed": self.n_failed,
        }

    def summary_line(self) -> str:
        return (
            f"f1 mean {self.f1.mean:.4f} (max {self.f1.max:.4f}, min {self.f1.min:.4f}, "
            f"std {self.f1.std:.3e}) | f2 mean {self.f2.mean:.4f} (max {self.f2.max:.4f}, "
            f"min {self.f2.min:.4f}, std {self.f2.std:.3e}) | "
            f"{self.n_failed}/{self.n_records} failed"
        )


def _evaluate_pair(
    gap_tol: float, item: Tuple[int, CoeffVector, CoeffVector]
) -> RecordEval:
    index, h_true, h_pred = item
    try:
        cos_angle = cosine_similarity(h_pred.values, h_true.values)
    except ValueError:
        cos_angle = float("nan")
    predicted = reconstruct_state(h_pred, gap_tol)
    if predicted.failed:
        return RecordEval(
            record_index=index, cos_angle=cos_angle, gap=predicted.gap, failed=True
        )
    # the stored h passed the gap check when the record was generated
    truth = ground_state(build_hamiltonian(h_true), 0.0).density_matrix()
    rho_nn = predicted.rho
    return RecordEval(
        record_index=index,
        f1=fidelity_f1(truth, rho_nn),
        f2=fidelity_f2(truth, rho_nn),
        cos_angle=cos_angle,
        gap=predicted.gap,
    )


def evaluate_predictions(
    predictions: Sequence[CoeffVector],
    test_records: Sequence[DatasetRecord],
    gap_tol: float = DEFAULT_GAP_TOL,
    workers: int = 1,
) -> EvalReport:
    """Fidelities of predicted coefficient vectors against the records' true h"""
    if len(predictions) != len(test_records):
        raise DimensionError(
            f"{len(predictions)} predictions for {len(test_records)} records"
        )
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    items = [
        (i, record.h, h_pred)
        for i, (record, h_pred) in enumerate(zip(test_records, predictions))
    ]
    task = partial(_evaluate_pair, gap_tol)
    if workers == 1 or len(items) < 2:
        results = [task(item) for item in items]
    else:
        chunksize = max(1, len(items) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(task, items, chunksize=chunksize))

    report = EvalReport.from_records(results)
    log.info(
        "evaluation_finished",
        n_records=report.n_records,
        n_failed=report.n_failed,
        f1_mean=report.f1.mean,
        f2_mean=report.f2.mean,
    )
    return report


def _predict_records(
    params: ModelParams, measurements: np.ndarray, test_records: Sequence[DatasetRecord]
) -> List[CoeffVector]:
    topology = test_records[0].h.topology
    params.layer_spec.check_topology(topology)
    outputs = predict_batch(params, measurements)
    return [CoeffVector(topology, row) for row in outputs]


def evaluate_model(
    params: ModelParams,
    test_records: Sequence[DatasetRecord],
    gap_tol: float = DEFAULT_GAP_TOL,
    workers: int = 1,
) -> EvalReport:
    """predict -> reconstruct -> f1/f2 against the true ground state, per record"""
    if not test_records:
        raise ValueError("test set is empty")
    measurements = np.stack([record.m.values for record in test_records])
    predictions = _predict_records(params, measurements, test_records)
    return evaluate_predictions(predictions, test_records, gap_tol, workers)


class NoiseLevelReport(BaseModel):
    sigma: float
    report: EvalReport


def noise_robustness_eval(
    params: ModelParams,
    test_records: Sequence[DatasetRecord],
    sigmas: Sequence[float],
    seed: int,
    gap_tol: float = DEFAULT_GAP_TOL,
    workers: int = 1,
) -> List[NoiseLevelReport]:
    """
    One EvalReport per sigma, with Gaussian noise on the measurement inputs

    Record i is perturbed with seed mix(seed, i) at every sigma, so the
    curve compares the same noise directions at growing amplitude.
    """
    if not test_records:
        raise ValueError("test set is empty")
    if any(sigma < 0.0 for sigma in sigmas):
        raise ValueError(f"sigmas must be non-negative, got {list(sigmas)}")

    rows = []
    for sigma in sigmas:
        measurements = np.stack(
            [
                add_measurement_noise(record.m, sigma, mix_seed(seed, i)).values
                for i, record in enumerate(test_records)
            ]
        )
        predictions = _predict_records(params, measurements, test_records)
        report = evaluate_predictions(predictions, test_records, gap_tol, workers)
        log.info("noise_level_evaluated", sigma=sigma, f1_mean=report.f1.mean)
        rows.append(NoiseLevelReport(sigma=sigma, report=report))
    return rows
