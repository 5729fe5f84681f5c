"""
Random Hamiltonian coefficients and measurement noise
"""

from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.hamiltonian import CoeffVector
from ..core.states import DEFAULT_GAP_TOL, MeasurementVector
from ..core.topology import Topology
from ..seeding import rng


class SamplingSpec(BaseModel):
    """
    How random Hamiltonians are drawn

    Each record first draws its own mean mu ~ U(mean_range) and standard
    deviation s ~ U(std_range), then every coefficient i.i.d. from N(mu, s^2).
    """

    model_config = ConfigDict(frozen=True)

    topology: Topology
    mean_range: Tuple[float, float] = (-1.0, 1.0)
    std_range: Tuple[float, float] = (0.5, 1.5)
    gap_tol: float = Field(default=DEFAULT_GAP_TOL, ge=0.0)
    max_resamples: int = Field(default=16, ge=1)

    @model_validator(mode="after")
    def _check_ranges(self) -> "SamplingSpec":
        if self.mean_range[0] > self.mean_range[1]:
            raise ValueError(f"mean_range {self.mean_range} is reversed")
        if self.std_range[0] > self.std_range[1]:
            raise ValueError(f"std_range {self.std_range} is reversed")
        if self.std_range[0] <= 0.0:
            raise ValueError("std_range lower bound must be positive")
        return self


def sample_coeffs(spec: SamplingSpec, record_seed: int) -> CoeffVector:
    """Deterministic coefficient draw for one record"""
    generator = rng(record_seed)
    mean = generator.uniform(*spec.mean_range)
    std = generator.uniform(*spec.std_range)
    values = generator.normal(mean, std, size=spec.topology.coeff_dim)
    return CoeffVector(spec.topology, values)


def measurement_noise(shape: Tuple[int, ...], sigma: float, seed: int) -> np.ndarray:
    """Raw Gaussian perturbation, before clipping"""
    if sigma < 0.0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    return rng(seed).normal(0.0, sigma, size=shape)


def perturb(values: np.ndarray, sigma: float, seed: int) -> np.ndarray:
    """Add N(0, sigma^2) to every entry and clip to [-1, 1]"""
    values = np.asarray(values, dtype=np.float64)
    if sigma < 0.0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0.0:
        return values.copy()
    noisy = values + measurement_noise(values.shape, sigma, seed)
    return np.clip(noisy, -1.0, 1.0)


def add_measurement_noise(
    m: MeasurementVector, sigma: float, seed: int
) -> MeasurementVector:
    return MeasurementVector(m.topology, perturb(m.values, sigma, seed))
