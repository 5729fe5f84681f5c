"""
Deterministic seed derivation

Every random draw in localqst comes from a Philox generator keyed on a
64-bit seed. Child seeds are derived with a splitmix64 mix of a parent seed
and a counter, so any element of a stream can be computed independently of
the others (and of the worker that computes it).
"""

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix_seed(seed: int, index: int) -> int:
    """splitmix64 finalizer over seed + (index + 1) * golden ratio"""
    if seed < 0 or index < 0:
        raise ValueError("seed and index must be non-negative")
    z = (seed + (index + 1) * _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def rng(key: int) -> np.random.Generator:
    """Counter-based generator keyed on a 64-bit seed"""
    if key < 0:
        raise ValueError("seed must be non-negative")
    return np.random.Generator(np.random.Philox(key=key & MASK64))
