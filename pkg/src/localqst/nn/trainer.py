"""
Minibatch training loop for the coefficient regressor
"""

from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..dataset.generator import DatasetRecord, records_to_arrays, shuffled_split
from ..dataset.sampling import perturb
from ..errors import DimensionError, NonFiniteError, TrainingDivergedError
from ..log import get_logger
from ..seeding import mix_seed, rng
from .losses import LossKind, batch_loss
from .network import LayerSpec, ModelParams, backward, forward, init_params
from .optim import AdamState, adam_step

log = get_logger(__name__)

# seed streams derived from TrainConfig.seed
_INIT_STREAM = 0
_SPLIT_STREAM = 1
_SHUFFLE_STREAM = 2
_NOISE_STREAM = 3


class TrainConfig(BaseModel):
    """Hyperparameters of one training run"""

    model_config = ConfigDict(frozen=True)

    layer_spec: LayerSpec
    epochs: int = Field(default=100, ge=1)
    batch_size: int = Field(default=512, ge=1)
    lr: float = Field(default=1e-3, gt=0)
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    eps: float = Field(default=1e-8, gt=0)
    seed: int = Field(default=0, ge=0)
    shuffle_each_epoch: bool = True
    validation_fraction: float = Field(default=0.2, ge=0, lt=1)
    loss: LossKind = LossKind.COSINE
    input_noise: float = Field(default=0.0, ge=0)


class EpochStats(BaseModel):
    epoch: int
    train_loss: float
    val_loss: Optional[float] = None


# called after every epoch with the stats and the parameters reached so far
EpochCallback = Callable[[EpochStats, ModelParams], None]


def _split_indices(count: int, config: TrainConfig) -> Tuple[np.ndarray, np.ndarray]:
    if config.validation_fraction == 0.0 or count < 2:
        return np.arange(count), np.arange(0)
    train_idx, val_idx = shuffled_split(
        count, 1.0 - config.validation_fraction, mix_seed(config.seed, _SPLIT_STREAM)
    )
    if len(train_idx) == 0:
        return np.arange(count), np.arange(0)
    return train_idx, val_idx


def _evaluate_loss(
    params: ModelParams, kind: LossKind, inputs: np.ndarray, targets: np.ndarray
) -> float:
    outputs, _ = forward(params, inputs)
    loss, _ = batch_loss(kind, outputs, targets)
    return loss


def train(
    records: Sequence[DatasetRecord],
    config: TrainConfig,
    on_epoch: Optional[EpochCallback] = None,
) -> Tuple[ModelParams, List[EpochStats]]:
    """
    Train a fresh network on ``records``

    The validation split, minibatch order, initial weights and optional input
    noise all derive from ``config.seed``; the result is bitwise reproducible.
    """
    if not records:
        raise ValueError("cannot train on an empty dataset")
    topology = records[0].h.topology
    config.layer_spec.check_topology(topology)
    if any(record.h.topology != topology for record in records):
        raise DimensionError("records mix topologies")

    inputs, targets = records_to_arrays(records)
    train_idx, val_idx = _split_indices(len(records), config)
    x_train, y_train = inputs[train_idx], targets[train_idx]
    x_val, y_val = inputs[val_idx], targets[val_idx]

    params = init_params(config.layer_spec, mix_seed(config.seed, _INIT_STREAM))
    state = AdamState.zeros_like(
        params, lr=config.lr, beta1=config.beta1, beta2=config.beta2, eps=config.eps
    )
    shuffler = rng(mix_seed(config.seed, _SHUFFLE_STREAM))
    noise_key = mix_seed(config.seed, _NOISE_STREAM)

    log.info(
        "training_started",
        layers=str(config.layer_spec),
        n_train=len(x_train),
        n_val=len(x_val),
        epochs=config.epochs,
        batch_size=config.batch_size,
        loss=config.loss.value,
    )

    history: List[EpochStats] = []
    n_train = len(x_train)
    order = np.arange(n_train)
    batch_counter = 0
    for epoch in range(1, config.epochs + 1):
        if config.shuffle_each_epoch or epoch == 1:
            order = shuffler.permutation(n_train)
        weighted_loss = 0.0
        for batch, start in enumerate(range(0, n_train, config.batch_size)):
            idx = order[start : start + config.batch_size]
            x_batch = x_train[idx]
            if config.input_noise > 0.0:
                x_batch = perturb(
                    x_batch, config.input_noise, mix_seed(noise_key, batch_counter)
                )
            batch_counter += 1
            loss = float("nan")
            try:
                outputs, cache = forward(params, x_batch)
                loss, grad_output = batch_loss(config.loss, outputs, y_train[idx])
                if not np.isfinite(loss):
                    raise NonFiniteError(f"loss is {loss}")
                grads = backward(params, cache, grad_output)
                params, state = adam_step(params, grads, state)
            except DimensionError:
                raise
            except ValueError as exc:
                # zero-norm outputs and non-finite gradients both end the run
                log.error("training_diverged", epoch=epoch, batch=batch, error=str(exc))
                raise TrainingDivergedError(epoch, batch, loss) from exc
            weighted_loss += loss * len(idx)

        val_loss = None
        if len(x_val):
            val_loss = _evaluate_loss(params, config.loss, x_val, y_val)
        stats = EpochStats(epoch=epoch, train_loss=weighted_loss / n_train, val_loss=val_loss)
        history.append(stats)
        log.debug(
            "epoch_finished", epoch=epoch, train_loss=stats.train_loss, val_loss=val_loss
        )
        if on_epoch is not None:
            on_epoch(stats, params)

    log.info("training_finished", epochs=config.epochs, train_loss=history[-1].train_loss)
    return params, history
