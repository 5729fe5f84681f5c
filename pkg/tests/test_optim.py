"""
Tests for the Adam optimizer
"""

import math

import numpy as np
import pytest

from localqst.errors import DimensionError, NonFiniteError
from localqst.nn import AdamState, ModelParams, adam_step


def scalar_params(value: float) -> ModelParams:
    return ModelParams(weights=(np.array([[value]]),), biases=(np.zeros(1),))


def scalar_grads(g: float) -> ModelParams:
    return ModelParams(weights=(np.array([[g]]),), biases=(np.zeros(1),))


def reference_adam(theta, grad_fn, steps, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
    """Plain-float Adam, one parameter"""
    m = v = 0.0
    trace = []
    for t in range(1, steps + 1):
        g = grad_fn(theta)
        m = beta1 * m + (1 - beta1) * g
        v = beta2 * v + (1 - beta2) * g * g
        m_hat = m / (1 - beta1**t)
        v_hat = v / (1 - beta2**t)
        theta = theta - lr * m_hat / (math.sqrt(v_hat) + eps)
        trace.append(theta)
    return trace


class TestAdam:
    """Test adam_step"""

    def test_first_step_is_lr_times_sign(self):
        params = scalar_params(1.0)
        state = AdamState.zeros_like(params)
        updated, state = adam_step(params, scalar_grads(0.5), state)
        assert updated.weights[0][0, 0] - 1.0 == pytest.approx(-0.001, rel=1e-6)
        assert state.t == 1

    def test_zero_gradients_leave_params(self):
        params = scalar_params(2.5)
        state = AdamState.zeros_like(params)
        for _ in range(5):
            params, state = adam_step(params, scalar_grads(0.0), state)
        assert params.weights[0][0, 0] == 2.5

    @pytest.mark.parametrize("steps", [10, 100])
    def test_matches_reference_on_quadratic(self, steps):
        # f(theta) = (theta - 3)^2
        grad_fn = lambda theta: 2.0 * (theta - 3.0)  # noqa: E731
        expected = reference_adam(0.5, grad_fn, steps, lr=0.05)

        params = scalar_params(0.5)
        state = AdamState.zeros_like(params, lr=0.05)
        for k in range(steps):
            theta = params.weights[0][0, 0]
            params, state = adam_step(params, scalar_grads(grad_fn(theta)), state)
            assert params.weights[0][0, 0] == pytest.approx(expected[k], abs=1e-12)

    def test_second_moment_non_negative(self):
        params = scalar_params(0.0)
        state = AdamState.zeros_like(params)
        for g in (-3.0, 1.0, -0.5):
            params, state = adam_step(params, scalar_grads(g), state)
        assert all(np.all(v >= 0.0) for v in state.v)

    def test_inputs_untouched(self):
        params = scalar_params(1.0)
        state = AdamState.zeros_like(params)
        adam_step(params, scalar_grads(1.0), state)
        assert params.weights[0][0, 0] == 1.0
        assert state.t == 0
        assert state.m[0][0, 0] == 0.0

    def test_non_finite_gradient(self):
        params = scalar_params(1.0)
        with pytest.raises(NonFiniteError):
            adam_step(params, scalar_grads(float("nan")), AdamState.zeros_like(params))

    def test_layout_mismatch(self):
        params = scalar_params(1.0)
        bigger = ModelParams(weights=(np.zeros((2, 1)),), biases=(np.zeros(2),))
        with pytest.raises(DimensionError):
            adam_step(params, bigger, AdamState.zeros_like(params))
