"""
Pauli algebra on n qubits

Qubit 0 is the most significant tensor factor, so the computational basis
index of |b_0 b_1 ... b_{n-1}> is sum_q b_q * 2**(n-1-q).

A Pauli string P acts on a basis state as

    P|r> = i**n_y * (-1)**popcount(r & zmask) |r ^ xmask>

where xmask covers the X and Y factors, zmask covers the Z and Y factors and
n_y counts the Y factors (Y = iXZ). Every operation below works on that
permutation-with-phase form and never multiplies out dense Kronecker
products except in ``to_matrix``.
"""

from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from typing import Sequence, Tuple, Union

import numpy as np

from ..errors import DimensionError


class PauliLabel(IntEnum):
    """Single-qubit Pauli operators, numbered as in sigma_1..sigma_4"""

    X = 1
    Y = 2
    Z = 3
    I = 4  # noqa: E741

    @classmethod
    def parse(cls, value: Union["PauliLabel", str, int]) -> "PauliLabel":
        if isinstance(value, PauliLabel):
            return value
        if isinstance(value, str):
            try:
                return cls[value.upper()]
            except KeyError:
                raise ValueError(f"unknown Pauli label {value!r}") from None
        return cls(value)

    @property
    def matrix(self) -> np.ndarray:
        return _SINGLE_QUBIT[self]


# measured single-body labels, in canonical order
MEASURED_PAULIS: Tuple[PauliLabel, ...] = (PauliLabel.X, PauliLabel.Y, PauliLabel.Z)

_SINGLE_QUBIT = {
    PauliLabel.X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    PauliLabel.Y: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    PauliLabel.Z: np.array([[1, 0], [0, -1]], dtype=np.complex128),
    PauliLabel.I: np.eye(2, dtype=np.complex128),
}

_I_POWERS = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, one label per qubit"""

    labels: Tuple[PauliLabel, ...]

    def __post_init__(self) -> None:
        labels = tuple(PauliLabel.parse(label) for label in self.labels)
        if not labels:
            raise DimensionError("a Pauli string needs at least one qubit")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def on_sites(
        cls, n_qubits: int, sites: Sequence[int], paulis: Sequence[PauliLabel]
    ) -> "PauliString":
        """Place ``paulis[k]`` on qubit ``sites[k]``, identity elsewhere"""
        labels = [PauliLabel.I] * n_qubits
        for site, pauli in zip(sites, paulis):
            if not 0 <= site < n_qubits:
                raise DimensionError(f"qubit {site} out of range for {n_qubits} qubits")
            labels[site] = PauliLabel.parse(pauli)
        return cls(tuple(labels))

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @property
    def is_identity(self) -> bool:
        return all(label == PauliLabel.I for label in self.labels)

    @property
    def support(self) -> Tuple[Tuple[int, ...], Tuple[PauliLabel, ...]]:
        """Qubits acted on non-trivially (ascending) and their labels"""
        sites = tuple(q for q, label in enumerate(self.labels) if label != PauliLabel.I)
        return sites, tuple(self.labels[q] for q in sites)

    @cached_property
    def xmask(self) -> int:
        n = self.n_qubits
        return sum(
            1 << (n - 1 - q)
            for q, label in enumerate(self.labels)
            if label in (PauliLabel.X, PauliLabel.Y)
        )

    @cached_property
    def phases(self) -> np.ndarray:
        """Phase picked up by each basis state, indexed by the input state"""
        n = self.n_qubits
        r = np.arange(self.dim, dtype=np.int64)
        parity = np.zeros(self.dim, dtype=np.int64)
        n_y = 0
        for q, label in enumerate(self.labels):
            if label in (PauliLabel.Z, PauliLabel.Y):
                parity ^= (r >> (n - 1 - q)) & 1
            if label == PauliLabel.Y:
                n_y += 1
        phases = _I_POWERS[n_y % 4] * (1 - 2 * parity).astype(np.complex128)
        phases.setflags(write=False)
        return phases

    @cached_property
    def targets(self) -> np.ndarray:
        """Basis state each input basis state is mapped to"""
        targets = np.arange(self.dim, dtype=np.int64) ^ self.xmask
        targets.setflags(write=False)
        return targets

    def to_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.dim, self.dim), dtype=np.complex128)
        self.add_to(matrix, 1.0)
        return matrix

    def add_to(self, matrix: np.ndarray, coeff: float) -> None:
        """In-place ``matrix += coeff * P``"""
        columns = np.arange(self.dim)
        matrix[self.targets, columns] += coeff * self.phases

    def trace_with(self, matrix: np.ndarray) -> complex:
        """Tr(matrix @ P) without forming P"""
        rows = np.arange(self.dim)
        return complex(np.sum(matrix[rows, self.targets] * self.phases))

    def expectation(self, amplitudes: np.ndarray) -> complex:
        """<psi|P|psi> for a state vector"""
        return complex(np.vdot(amplitudes[self.targets], self.phases * amplitudes))

    def __str__(self) -> str:
        return "".join(label.name for label in self.labels)


def build_basis_element(labels: Sequence[Union[PauliLabel, str, int]]) -> np.ndarray:
    """Dense 2^n x 2^n matrix of a non-identity Pauli string"""
    string = PauliString(tuple(labels))
    if string.is_identity:
        raise ValueError("the all-identity string is not a basis element")
    return string.to_matrix()
