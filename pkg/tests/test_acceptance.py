"""
Reference-scale training runs

These take minutes to hours of CPU and are deselected by default; run them
with ``pytest -m slow``. Every figure is the mean over three seeds.
"""

from typing import List

import numpy as np
import pytest

from localqst.core import Topology
from localqst.dataset import SamplingSpec, generate_dataset
from localqst.nn import LayerSpec, TrainConfig, train
from localqst.pipeline import SweepGrid, SweepTable, default_workers, evaluate_model, run_sweep

pytestmark = pytest.mark.slow

SEEDS = (0, 1, 2)
TEST_RECORDS = 1000
SIZES = [500, 1000, 5000, 10000]


def _datasets(topology: Topology, n_train: int, seed: int):
    spec = SamplingSpec(topology=topology)
    workers = default_workers()
    base = generate_dataset(spec, n_train, master_seed=1000 + seed, workers=workers)
    test = generate_dataset(spec, TEST_RECORDS, master_seed=2000 + seed, workers=workers)
    return base, test


@pytest.fixture(scope="module")
def full4_sweeps() -> List[SweepTable]:
    """Size sweep at epoch 100, batch 512, once per seed"""
    topology = Topology.full(4)
    tables = []
    for seed in SEEDS:
        base, test = _datasets(topology, max(SIZES), seed)
        grid = SweepGrid(
            train_sizes=SIZES,
            epochs=[100],
            batch_sizes=[512],
            sampling=base.spec,
            layer_spec=LayerSpec.for_topology(topology),
            seed=seed,
            validation_fraction=0.0,
        )
        tables.append(run_sweep(grid, base, test, workers=default_workers()))
    return tables


def _mean(tables: List[SweepTable], size: int, metric: str) -> float:
    return float(np.mean([getattr(t.lookup(size, 100, 512), metric).mean for t in tables]))


class TestFourQubitSweep:
    """Size axis on the 4-qubit full graph"""

    def test_five_thousand_records(self, full4_sweeps):
        assert _mean(full4_sweeps, 5000, "f1") == pytest.approx(0.897, abs=0.04)
        assert _mean(full4_sweeps, 5000, "f2") == pytest.approx(0.947, abs=0.03)

    def test_ten_thousand_records(self, full4_sweeps):
        assert _mean(full4_sweeps, 10000, "f1") == pytest.approx(0.933, abs=0.03)
        assert _mean(full4_sweeps, 10000, "f2") == pytest.approx(0.966, abs=0.02)

    def test_f1_grows_with_training_size(self, full4_sweeps):
        means = [_mean(full4_sweeps, size, "f1") for size in SIZES]
        assert all(a < b for a, b in zip(means, means[1:])), means

    def test_f2_spread_below_f1_spread(self, full4_sweeps):
        for table in full4_sweeps:
            report = table.lookup(10000, 100, 512)
            assert report.f2.std < report.f1.std


def _full_scale(topology: Topology, n_train: int, epochs: int):
    f1, f2 = [], []
    for seed in SEEDS:
        base, test = _datasets(topology, n_train, seed)
        config = TrainConfig(
            layer_spec=LayerSpec.for_topology(topology),
            epochs=epochs,
            batch_size=512,
            seed=seed,
            validation_fraction=0.0,
        )
        params, _ = train(base.records, config)
        report = evaluate_model(params, test.records, workers=default_workers())
        f1.append(report.f1.mean)
        f2.append(report.f2.mean)
    return float(np.mean(f1)), float(np.mean(f2))


class TestFullScale:
    """Largest configurations"""

    def test_four_qubits_long_run(self):
        f1, f2 = _full_scale(Topology.full(4), 120_000, 300)
        assert f1 >= 0.955
        assert f2 >= 0.975

    def test_seven_qubit_chain(self):
        f1, _ = _full_scale(Topology.chain(7), 50_000, 100)
        assert f1 >= 0.90
