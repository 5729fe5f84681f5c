"""
Fully-connected feedforward network: ReLU hidden layers, linear output
"""

from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from ..core.hamiltonian import CoeffVector
from ..core.states import MeasurementVector
from ..core.topology import Topology, TopologyKind
from ..errors import DimensionError, NonFiniteError
from ..seeding import rng

# hidden layers of the two reference architectures
FULL_4_HIDDEN = (300, 300)
CHAIN_7_HIDDEN = (150, 300, 300, 150)


class LayerSpec(BaseModel):
    """Layer widths from input to output, e.g. 66-300-300-66"""

    model_config = ConfigDict(frozen=True)

    sizes: Tuple[int, ...]

    @field_validator("sizes")
    @classmethod
    def _check_sizes(cls, sizes: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(sizes) < 2:
            raise ValueError("a network needs at least an input and an output size")
        if any(size < 1 for size in sizes):
            raise ValueError(f"layer sizes must be positive, got {sizes}")
        return sizes

    @classmethod
    def with_hidden(cls, topology: Topology, hidden: Sequence[int]) -> "LayerSpec":
        return cls(
            sizes=(topology.measurement_dim, *hidden, topology.coeff_dim)
        )

    @classmethod
    def for_topology(cls, topology: Topology) -> "LayerSpec":
        """Reference architecture for the topology"""
        if topology.kind == TopologyKind.CHAIN and topology.n_qubits == 7:
            return cls.with_hidden(topology, CHAIN_7_HIDDEN)
        return cls.with_hidden(topology, FULL_4_HIDDEN)

    @property
    def input_size(self) -> int:
        return self.sizes[0]

    @property
    def output_size(self) -> int:
        return self.sizes[-1]

    def check_topology(self, topology: Topology) -> None:
        if (self.input_size, self.output_size) != (
            topology.measurement_dim,
            topology.coeff_dim,
        ):
            raise DimensionError(
                f"network {self} does not fit {topology} "
                f"({topology.measurement_dim} inputs, {topology.coeff_dim} outputs)"
            )

    def __str__(self) -> str:
        return "-".join(str(size) for size in self.sizes)


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Per-layer weights (out x in) and biases (out); also used for gradients"""

    weights: Tuple[np.ndarray, ...]
    biases: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        weights = tuple(np.asarray(w, dtype=np.float64) for w in self.weights)
        biases = tuple(np.asarray(b, dtype=np.float64) for b in self.biases)
        if len(weights) != len(biases) or not weights:
            raise DimensionError("weights and biases must pair up, one per layer")
        for k, (w, b) in enumerate(zip(weights, biases)):
            if w.ndim != 2 or b.shape != (w.shape[0],):
                raise DimensionError(f"layer {k}: weight {w.shape} vs bias {b.shape}")
            if k > 0 and w.shape[1] != weights[k - 1].shape[0]:
                raise DimensionError(f"layer {k} input does not match layer {k - 1}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "biases", biases)

    @classmethod
    def from_arrays(cls, arrays: Sequence[np.ndarray]) -> "ModelParams":
        """Inverse of ``arrays``: W0, b0, W1, b1, ..."""
        return cls(weights=tuple(arrays[0::2]), biases=tuple(arrays[1::2]))

    def arrays(self) -> Iterator[np.ndarray]:
        for w, b in zip(self.weights, self.biases):
            yield w
            yield b

    @property
    def layer_spec(self) -> LayerSpec:
        return LayerSpec(
            sizes=(self.weights[0].shape[1], *(w.shape[0] for w in self.weights))
        )

    @property
    def input_size(self) -> int:
        return self.weights[0].shape[1]

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in self.arrays())


@dataclass(frozen=True, eq=False)
class ForwardCache:
    """Layer inputs and pre-activations kept for backpropagation"""

    inputs: List[np.ndarray]
    pre_activations: List[np.ndarray]
    single: bool


def init_params(spec: LayerSpec, seed: int) -> ModelParams:
    """He-uniform weights U(-a, a), a = sqrt(6 / fan_in); zero biases"""
    generator = rng(seed)
    weights = []
    biases = []
    for fan_in, fan_out in zip(spec.sizes[:-1], spec.sizes[1:]):
        bound = np.sqrt(6.0 / fan_in)
        weights.append(generator.uniform(-bound, bound, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return ModelParams(weights=tuple(weights), biases=tuple(biases))


def forward(params: ModelParams, x: np.ndarray) -> Tuple[np.ndarray, ForwardCache]:
    """Forward pass for one input vector or a batch of row vectors"""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    activation = np.atleast_2d(x)
    if activation.ndim != 2 or activation.shape[1] != params.input_size:
        raise DimensionError(
            f"network expects {params.input_size} inputs, got shape {x.shape}"
        )

    inputs: List[np.ndarray] = []
    pre_activations: List[np.ndarray] = []
    last = len(params.weights) - 1
    for k, (w, b) in enumerate(zip(params.weights, params.biases)):
        inputs.append(activation)
        z = activation @ w.T + b
        pre_activations.append(z)
        activation = np.maximum(z, 0.0) if k < last else z

    output = activation[0] if single else activation
    return output, ForwardCache(inputs, pre_activations, single)


def backward(
    params: ModelParams, cache: ForwardCache, grad_output: np.ndarray
) -> ModelParams:
    """Gradients of a scalar loss w.r.t. every weight and bias; ReLU'(0) = 0"""
    grad = np.atleast_2d(np.asarray(grad_output, dtype=np.float64))
    if grad.shape != cache.pre_activations[-1].shape:
        raise DimensionError(
            f"grad_output shape {np.shape(grad_output)} does not match "
            f"output shape {cache.pre_activations[-1].shape}"
        )

    n_layers = len(params.weights)
    weight_grads: List[np.ndarray] = [np.empty(0)] * n_layers
    bias_grads: List[np.ndarray] = [np.empty(0)] * n_layers
    for k in reversed(range(n_layers)):
        if k < n_layers - 1:
            grad = grad * (cache.pre_activations[k] > 0.0)
        weight_grads[k] = grad.T @ cache.inputs[k]
        bias_grads[k] = grad.sum(axis=0)
        if k > 0:
            grad = grad @ params.weights[k]
    return ModelParams(weights=tuple(weight_grads), biases=tuple(bias_grads))


def predict_batch(params: ModelParams, inputs: np.ndarray) -> np.ndarray:
    """Raw network outputs for a batch of measurement rows"""
    outputs, _ = forward(params, np.atleast_2d(inputs))
    if not np.all(np.isfinite(outputs)):
        raise NonFiniteError("network produced non-finite outputs")
    return outputs


def predict(params: ModelParams, m: MeasurementVector) -> CoeffVector:
    """Predicted coefficient direction h_pred for one measurement vector"""
    params.layer_spec.check_topology(m.topology)
    output, _ = forward(params, m.values)
    return CoeffVector(m.topology, output)
