"""
2-local Hamiltonians in the canonical Pauli basis
"""

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from ..errors import DimensionError, NonFiniteError
from .pauli import PauliLabel
from .topology import Topology, TopologyKind


@dataclass(frozen=True, eq=False)
class CoeffVector:
    """Hamiltonian coefficients h = {omega, J} in canonical order"""

    topology: Topology
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (self.topology.coeff_dim,):
            raise DimensionError(
                f"{self.topology} needs {self.topology.coeff_dim} coefficients, "
                f"got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise NonFiniteError("coefficient vector has non-finite entries")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def scaled(self, factor: float) -> "CoeffVector":
        return CoeffVector(self.topology, factor * self.values)

    def as_dict(self) -> Dict[str, float]:
        """Coefficients keyed by term name, e.g. ``X0`` or ``Z1Y2``"""
        return {
            term.name: float(value)
            for term, value in zip(self.topology.terms, self.values)
        }


def _check_operator(matrix: np.ndarray, topology: Topology) -> np.ndarray:
    matrix = np.asarray(matrix)
    if matrix.shape != (topology.dim, topology.dim):
        raise DimensionError(
            f"{topology} expects a {topology.dim}x{topology.dim} operator, "
            f"got shape {matrix.shape}"
        )
    return matrix


def build_hamiltonian(h: CoeffVector) -> np.ndarray:
    """H = sum_k h_k B_k over the canonical basis, as a dense Hermitian matrix"""
    topology = h.topology
    hamiltonian = np.zeros((topology.dim, topology.dim), dtype=np.complex128)
    for coeff, term in zip(h.values, topology.terms):
        if coeff == 0.0:
            continue
        for string in term.strings:
            string.add_to(hamiltonian, coeff)
    return hamiltonian


def project_to_coeffs(hamiltonian: np.ndarray, topology: Topology) -> CoeffVector:
    """Coefficients Tr(H B) / (|group| 2^n) of H on the topology's basis"""
    hamiltonian = _check_operator(hamiltonian, topology)
    values = np.empty(topology.coeff_dim, dtype=np.float64)
    for k, term in enumerate(topology.terms):
        total = sum(string.trace_with(hamiltonian) for string in term.strings)
        values[k] = total.real / (len(term.strings) * topology.dim)
    return CoeffVector(topology, values)


def qubit_permutation_indices(topology: Topology, perm: Sequence[int]) -> np.ndarray:
    """
    Canonical-order permutation induced by relabeling qubit q as perm[q]

    Returns ``source`` such that ``values[source]`` is the coefficient (or
    measurement) vector of the relabeled system. Only defined on the fully
    connected graph, the one topology closed under every relabeling.
    """
    if topology.kind != TopologyKind.FULL:
        raise ValueError("qubit relabeling is only defined for the full graph")
    n = topology.n_qubits
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{list(perm)} is not a permutation of {n} qubits")

    slots: Dict[Tuple[Tuple[int, ...], Tuple[PauliLabel, ...]], int] = {
        (term.sites, term.paulis): k for k, term in enumerate(topology.terms)
    }
    source = np.empty(topology.coeff_dim, dtype=np.int64)
    for k, term in enumerate(topology.terms):
        sites = tuple(perm[s] for s in term.sites)
        paulis = term.paulis
        if len(sites) == 2 and sites[0] > sites[1]:
            sites, paulis = sites[::-1], paulis[::-1]
        source[slots[(sites, paulis)]] = k
    return source
