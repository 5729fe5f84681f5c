"""
Adam with bias correction
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..errors import DimensionError, NonFiniteError
from .network import ModelParams


@dataclass(frozen=True, eq=False)
class AdamState:
    """Step count and per-parameter moments, ordered like ``ModelParams.arrays``"""

    t: int
    m: Tuple[np.ndarray, ...]
    v: Tuple[np.ndarray, ...]
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def zeros_like(
        cls,
        params: ModelParams,
        lr: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ) -> "AdamState":
        zeros = tuple(np.zeros_like(a) for a in params.arrays())
        return cls(
            t=0,
            m=zeros,
            v=tuple(z.copy() for z in zeros),
            lr=lr,
            beta1=beta1,
            beta2=beta2,
            eps=eps,
        )


def adam_step(
    params: ModelParams, grads: ModelParams, state: AdamState
) -> Tuple[ModelParams, AdamState]:
    """One update; returns new params and state, inputs are left untouched"""
    thetas = list(params.arrays())
    gradients = list(grads.arrays())
    if len(thetas) != len(gradients) or len(thetas) != len(state.m):
        raise DimensionError("params, gradients and optimizer state disagree in layout")

    t = state.t + 1
    correction1 = 1.0 - state.beta1**t
    correction2 = 1.0 - state.beta2**t
    new_thetas: List[np.ndarray] = []
    new_m: List[np.ndarray] = []
    new_v: List[np.ndarray] = []
    for theta, g, m, v in zip(thetas, gradients, state.m, state.v):
        if g.shape != theta.shape:
            raise DimensionError(f"gradient shape {g.shape} vs parameter {theta.shape}")
        if not np.all(np.isfinite(g)):
            raise NonFiniteError("non-finite gradient entries")
        m = state.beta1 * m + (1.0 - state.beta1) * g
        v = state.beta2 * v + (1.0 - state.beta2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        new_thetas.append(theta - state.lr * m_hat / (np.sqrt(v_hat) + state.eps))
        new_m.append(m)
        new_v.append(v)

    new_state = AdamState(
        t=t,
        m=tuple(new_m),
        v=tuple(new_v),
        lr=state.lr,
        beta1=state.beta1,
        beta2=state.beta2,
        eps=state.eps,
    )
    return ModelParams.from_arrays(new_thetas), new_state
