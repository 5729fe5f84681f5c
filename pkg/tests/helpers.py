"""
Random states for tests
"""

import numpy as np

from localqst.seeding import rng


def random_state(dim: int, seed: int) -> np.ndarray:
    generator = rng(seed)
    psi = generator.normal(size=dim) + 1j * generator.normal(size=dim)
    return psi / np.linalg.norm(psi)


def random_mixed_state(dim: int, seed: int, rank: int = 3) -> np.ndarray:
    generator = rng(seed)
    a = generator.normal(size=(dim, rank)) + 1j * generator.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
