"""
Feedforward regressor from local measurements to Hamiltonian coefficients
"""

from .checkpoint import (
    CHECKPOINT_VERSION,
    MAGIC,
    checkpoint_header,
    load_checkpoint,
    save_checkpoint,
)
from .losses import LossKind, batch_loss, cosine_similarity, loss_cosine
from .network import (
    CHAIN_7_HIDDEN,
    FULL_4_HIDDEN,
    ForwardCache,
    LayerSpec,
    ModelParams,
    backward,
    forward,
    init_params,
    predict,
    predict_batch,
)
from .optim import AdamState, adam_step
from .trainer import EpochStats, TrainConfig, train

__all__ = [
    "CHAIN_7_HIDDEN",
    "CHECKPOINT_VERSION",
    "FULL_4_HIDDEN",
    "MAGIC",
    "AdamState",
    "EpochStats",
    "ForwardCache",
    "LayerSpec",
    "LossKind",
    "ModelParams",
    "TrainConfig",
    "adam_step",
    "backward",
    "batch_loss",
    "checkpoint_header",
    "cosine_similarity",
    "forward",
    "init_params",
    "load_checkpoint",
    "loss_cosine",
    "predict",
    "predict_batch",
    "save_checkpoint",
    "train",
]
