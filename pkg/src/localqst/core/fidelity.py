"""
Fidelity measures between density matrices

f1 is the normalized Hilbert-Schmidt overlap and needs no positivity, so it
applies to raw tomography matrices. f2 is the Uhlmann fidelity
Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)) (not squared).
"""

from typing import Optional, Tuple

import numpy as np

from ..errors import DimensionError, InvalidStateError, NotPSDError
from .states import validate_density_matrix

PSD_TOL = 1e-10
PURE_TOL = 1e-10


def _check_pair(
    rho1: np.ndarray, rho2: np.ndarray, unit_trace: bool
) -> Tuple[np.ndarray, np.ndarray]:
    rho1 = validate_density_matrix(rho1, unit_trace=unit_trace)
    rho2 = validate_density_matrix(rho2, unit_trace=unit_trace)
    if rho1.shape != rho2.shape:
        raise DimensionError(f"shape mismatch: {rho1.shape} vs {rho2.shape}")
    return rho1, rho2


def fidelity_f1(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """Tr(rho1 rho2) / sqrt(Tr rho1^2 Tr rho2^2)"""
    rho1, rho2 = _check_pair(rho1, rho2, unit_trace=False)
    norm1 = np.linalg.norm(rho1)
    norm2 = np.linalg.norm(rho2)
    if norm1 == 0.0 or norm2 == 0.0:
        raise InvalidStateError("f1 is undefined for a zero matrix")
    overlap = np.sum(rho1 * rho2.T).real
    return float(overlap / (norm1 * norm2))


def _psd_spectrum(rho: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    eigenvalues, eigenvectors = np.linalg.eigh(rho)
    if eigenvalues[0] < -PSD_TOL:
        raise NotPSDError(float(eigenvalues[0]))
    return np.clip(eigenvalues, 0.0, None), eigenvectors


def _pure_vector(eigenvalues: np.ndarray, eigenvectors: np.ndarray) -> Optional[np.ndarray]:
    if eigenvalues[-1] >= 1.0 - PURE_TOL:
        return eigenvectors[:, -1]
    return None


def fidelity_f2(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """Uhlmann fidelity; reduces to |<psi1|psi2>| for pure states"""
    rho1, rho2 = _check_pair(rho1, rho2, unit_trace=True)
    values1, vectors1 = _psd_spectrum(rho1)
    values2, vectors2 = _psd_spectrum(rho2)

    # a pure argument collapses the formula to sqrt(<psi|rho|psi>)
    for vectors, values, other in ((vectors1, values1, rho2), (vectors2, values2, rho1)):
        psi = _pure_vector(values, vectors)
        if psi is not None:
            overlap = np.vdot(psi, other @ psi).real
            return float(np.sqrt(np.clip(overlap, 0.0, 1.0)))

    sqrt_rho1 = (vectors1 * np.sqrt(values1)) @ vectors1.conj().T
    product = sqrt_rho1 @ rho2 @ sqrt_rho1
    product = 0.5 * (product + product.conj().T)
    spectrum = np.clip(np.linalg.eigvalsh(product), 0.0, None)
    return float(min(np.sum(np.sqrt(spectrum)), 1.0))
