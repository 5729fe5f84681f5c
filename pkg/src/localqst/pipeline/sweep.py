"""
Grid sweeps over training-set size, epochs and batch size
"""

from typing import Dict, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator

from ..core.states import DEFAULT_GAP_TOL
from ..core.topology import Topology
from ..dataset.generator import DatasetFile
from ..dataset.sampling import SamplingSpec
from ..errors import DatasetTopologyError, InsufficientDataError
from ..log import get_logger
from ..nn.losses import LossKind
from ..nn.network import LayerSpec, ModelParams
from ..nn.trainer import EpochStats, TrainConfig, train
from .evaluation import EvalReport, evaluate_model

log = get_logger(__name__)


def _dedupe(values: Sequence[int], axis: str) -> List[int]:
    unique: List[int] = []
    for value in values:
        if value not in unique:
            unique.append(value)
    if len(unique) != len(values):
        log.warning("duplicate_grid_values", axis=axis, given=list(values), kept=unique)
    return unique


class SweepGrid(BaseModel):
    """Axes of the sweep plus everything held fixed across its cells"""

    model_config = ConfigDict(frozen=True)

    train_sizes: List[int] = Field(min_length=1)
    epochs: List[int] = Field(min_length=1)
    batch_sizes: List[int] = Field(min_length=1)
    sampling: SamplingSpec
    layer_spec: LayerSpec
    seed: int = Field(default=0, ge=0)
    lr: float = Field(default=1e-3, gt=0)
    validation_fraction: float = Field(default=0.2, ge=0, lt=1)
    loss: LossKind = LossKind.COSINE

    @field_validator("train_sizes", "epochs", "batch_sizes")
    @classmethod
    def _positive_unique(cls, values: List[int], info: ValidationInfo) -> List[int]:
        if any(value < 1 for value in values):
            raise ValueError(f"{info.field_name} must be positive, got {values}")
        return _dedupe(values, info.field_name)

    @property
    def topology(self) -> Topology:
        return self.sampling.topology

    def cells(self) -> List[Tuple[int, int, int]]:
        """(train_size, epochs, batch_size) for every cell"""
        return [
            (size, epochs, batch)
            for size in self.train_sizes
            for batch in self.batch_sizes
            for epochs in self.epochs
        ]

    def train_config(self, epochs: int, batch_size: int) -> TrainConfig:
        return TrainConfig(
            layer_spec=self.layer_spec,
            epochs=epochs,
            batch_size=batch_size,
            lr=self.lr,
            seed=self.seed,
            validation_fraction=self.validation_fraction,
            loss=self.loss,
        )


class SweepCell(BaseModel):
    train_size: int
    epochs: int
    batch_size: int
    report: EvalReport


class SweepTable(BaseModel):
    cells: List[SweepCell]

    def lookup(self, train_size: int, epochs: int, batch_size: int) -> EvalReport:
        for cell in self.cells:
            if (cell.train_size, cell.epochs, cell.batch_size) == (
                train_size,
                epochs,
                batch_size,
            ):
                return cell.report
        raise KeyError((train_size, epochs, batch_size))

    def __len__(self) -> int:
        return len(self.cells)


def run_sweep(
    grid: SweepGrid,
    base: DatasetFile,
    test: DatasetFile,
    gap_tol: float = DEFAULT_GAP_TOL,
    workers: int = 1,
) -> SweepTable:
    """
    Train and evaluate every grid cell

    Each cell trains on the first ``train_size`` records of ``base``. Cells
    sharing size and batch share one run: the parameters after epoch e of a
    longer run are bitwise those of an e-epoch run, so shorter cells are read
    off as snapshots.
    """
    for name, file in (("base", base), ("test", test)):
        if file.topology != grid.topology:
            raise DatasetTopologyError(
                f"{name} dataset holds {file.topology}, grid expects {grid.topology}"
            )
    largest = max(grid.train_sizes)
    if base.count < largest:
        raise InsufficientDataError(
            f"base dataset has {base.count} records, grid needs {largest}"
        )
    if not test.count:
        raise ValueError("test set is empty")

    wanted = set(grid.epochs)
    reports: Dict[Tuple[int, int, int], EvalReport] = {}
    for size in grid.train_sizes:
        records = base.head(size).records
        for batch in grid.batch_sizes:
            snapshots: Dict[int, ModelParams] = {}

            def keep(stats: EpochStats, params: ModelParams) -> None:
                if stats.epoch in wanted:
                    snapshots[stats.epoch] = params

            train(records, grid.train_config(max(grid.epochs), batch), on_epoch=keep)
            for epochs in grid.epochs:
                report = evaluate_model(snapshots[epochs], test.records, gap_tol, workers)
                reports[(size, epochs, batch)] = report
                log.info(
                    "sweep_cell_finished",
                    train_size=size,
                    epochs=epochs,
                    batch_size=batch,
                    f1_mean=report.f1.mean,
                    f2_mean=report.f2.mean,
                )

    return SweepTable(
        cells=[
            SweepCell(train_size=s, epochs=e, batch_size=b, report=reports[(s, e, b)])
            for s, e, b in grid.cells()
        ]
    )

