"""
Tests for the training loop
"""

import numpy as np
import pytest
from pydantic import ValidationError

from localqst.core import Topology
from localqst.errors import DimensionError, TrainingDivergedError
from localqst.nn import LayerSpec, LossKind, TrainConfig, train


def same_params(a, b) -> bool:
    return all(x.tobytes() == y.tobytes() for x, y in zip(a.arrays(), b.arrays()))


@pytest.fixture
def config(full2):
    return TrainConfig(
        layer_spec=LayerSpec.with_hidden(full2, [16]), epochs=3, batch_size=8, seed=5
    )


class TestTrainConfig:
    def test_defaults(self, full4):
        cfg = TrainConfig(layer_spec=LayerSpec.for_topology(full4))
        assert (cfg.epochs, cfg.batch_size, cfg.lr) == (100, 512, 1e-3)
        assert cfg.loss == LossKind.COSINE
        assert cfg.validation_fraction == 0.2

    def test_bounds(self, full2):
        spec = LayerSpec.for_topology(full2)
        with pytest.raises(ValidationError):
            TrainConfig(layer_spec=spec, epochs=0)
        with pytest.raises(ValidationError):
            TrainConfig(layer_spec=spec, batch_size=0)
        with pytest.raises(ValidationError):
            TrainConfig(layer_spec=spec, validation_fraction=1.0)


class TestTrain:
    """Test train"""

    def test_smoke(self, small_dataset, full2):
        cfg = TrainConfig(layer_spec=LayerSpec.for_topology(full2), epochs=1, batch_size=1)
        params, history = train(small_dataset.records[:2], cfg)
        assert len(history) == 1
        assert np.isfinite(history[0].train_loss)
        assert params.is_finite()

    def test_deterministic(self, small_dataset, config):
        a, history_a = train(small_dataset.records, config)
        b, history_b = train(small_dataset.records, config)
        assert same_params(a, b)
        assert [h.train_loss for h in history_a] == [h.train_loss for h in history_b]

    def test_seed_matters(self, small_dataset, config):
        a, _ = train(small_dataset.records, config)
        b, _ = train(small_dataset.records, config.model_copy(update={"seed": 6}))
        assert not same_params(a, b)

    def test_history(self, small_dataset, config):
        _, history = train(small_dataset.records, config)
        assert [h.epoch for h in history] == [1, 2, 3]
        assert all(h.val_loss is not None and np.isfinite(h.val_loss) for h in history)

    def test_without_validation(self, small_dataset, config):
        _, history = train(small_dataset.records, config.model_copy(update={"validation_fraction": 0.0}))
        assert all(h.val_loss is None for h in history)

    def test_loss_decreases(self, small_dataset, config):
        longer = config.model_copy(update={"epochs": 40, "lr": 1e-2})
        _, history = train(small_dataset.records, longer)
        assert history[-1].train_loss < history[0].train_loss

    def test_epoch_snapshots_match_shorter_runs(self, small_dataset, config):
        snapshots = {}
        train(small_dataset.records, config, on_epoch=lambda stats, p: snapshots.update({stats.epoch: p}))
        shorter, _ = train(small_dataset.records, config.model_copy(update={"epochs": 2}))
        assert same_params(snapshots[2], shorter)

    @pytest.mark.parametrize("loss", list(LossKind))
    def test_every_loss_trains(self, small_dataset, config, loss):
        params, history = train(small_dataset.records, config.model_copy(update={"loss": loss}))
        assert params.is_finite()
        assert np.isfinite(history[-1].train_loss)

    def test_input_noise_is_seeded(self, small_dataset, config):
        noisy = config.model_copy(update={"input_noise": 0.05})
        a, _ = train(small_dataset.records, noisy)
        b, _ = train(small_dataset.records, noisy)
        c, _ = train(small_dataset.records, config)
        assert same_params(a, b)
        assert not same_params(a, c)

    def test_empty_dataset(self, config):
        with pytest.raises(ValueError):
            train([], config)

    def test_architecture_mismatch(self, small_dataset):
        cfg = TrainConfig(layer_spec=LayerSpec.for_topology(Topology.full(3)))
        with pytest.raises(DimensionError):
            train(small_dataset.records, cfg)

    def test_divergence_is_reported(self, small_dataset, config):
        wild = config.model_copy(update={"lr": 1e300, "loss": LossKind.MSE, "batch_size": 1})
        with np.errstate(all="ignore"), pytest.raises(TrainingDivergedError) as excinfo:
            train(small_dataset.records, wild)
        assert excinfo.value.epoch >= 1
