"""
Regression losses on coefficient vectors

Cosine proximity only sees the direction of h, which is all that matters:
the ground state of c*H equals that of H for every c > 0. MSE and MAE are
kept for comparison runs.
"""

from enum import Enum
from typing import Callable, Dict, Tuple

import numpy as np

from ..errors import DimensionError


class LossKind(str, Enum):
    COSINE = "cosine"
    MSE = "mse"
    MAE = "mae"


def _check_pair(y_pred: np.ndarray, y_true: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    y_pred = np.asarray(y_pred, dtype=np.float64)
    y_true = np.asarray(y_true, dtype=np.float64)
    if y_pred.shape != y_true.shape:
        raise DimensionError(f"shape mismatch: {y_pred.shape} vs {y_true.shape}")
    return y_pred, y_true


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    a, b = _check_pair(a, b)
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("cosine similarity is undefined for a zero vector")
    return float(np.dot(a, b) / (norm_a * norm_b))


def loss_cosine(y_pred: np.ndarray, y_true: np.ndarray) -> Tuple[float, np.ndarray]:
    """-cos(theta) and its gradient with respect to ``y_pred``"""
    loss, grad = _cosine_rows(np.atleast_2d(y_pred), np.atleast_2d(y_true))
    return float(loss[0]), grad[0]


def _cosine_rows(y_pred: np.ndarray, y_true: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    y_pred, y_true = _check_pair(y_pred, y_true)
    norm_pred = np.linalg.norm(y_pred, axis=1, keepdims=True)
    norm_true = np.linalg.norm(y_true, axis=1, keepdims=True)
    if np.any(norm_pred == 0.0) or np.any(norm_true == 0.0):
        raise ValueError("cosine proximity is undefined for a zero vector")
    cos = np.sum(y_pred * y_true, axis=1, keepdims=True) / (norm_pred * norm_true)
    grad = -(y_true / (norm_pred * norm_true) - cos * y_pred / norm_pred**2)
    return -cos[:, 0], grad


def _mse_rows(y_pred: np.ndarray, y_true: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    y_pred, y_true = _check_pair(y_pred, y_true)
    diff = y_pred - y_true
    width = y_pred.shape[1]
    return np.mean(diff**2, axis=1), 2.0 * diff / width


def _mae_rows(y_pred: np.ndarray, y_true: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    y_pred, y_true = _check_pair(y_pred, y_true)
    diff = y_pred - y_true
    width = y_pred.shape[1]
    return np.mean(np.abs(diff), axis=1), np.sign(diff) / width


_ROW_LOSSES: Dict[LossKind, Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]] = {
    LossKind.COSINE: _cosine_rows,
    LossKind.MSE: _mse_rows,
    LossKind.MAE: _mae_rows,
}


def batch_loss(
    kind: LossKind, y_pred: np.ndarray, y_true: np.ndarray
) -> Tuple[float, np.ndarray]:
    """Mean loss over the batch rows and its gradient (already divided by batch size)"""
    per_row, grad = _ROW_LOSSES[LossKind(kind)](np.atleast_2d(y_pred), np.atleast_2d(y_true))
    batch_size = per_row.shape[0]
    return float(np.mean(per_row)), grad / batch_size
