"""Exact quantum mechanics for small qubit systems"""

from .fidelity import fidelity_f1, fidelity_f2
from .hamiltonian import (
    CoeffVector,
    build_hamiltonian,
    project_to_coeffs,
    qubit_permutation_indices,
)
from .pauli import PauliLabel, PauliString, build_basis_element
from .states import (
    DEFAULT_GAP_TOL,
    MeasurementVector,
    PureState,
    density_matrix,
    ground_state,
    measure_from_density,
    measure_local,
    partial_trace,
    validate_density_matrix,
)
from .topology import MAX_QUBITS, CanonicalTerm, Topology, TopologyKind

__all__ = [
    "DEFAULT_GAP_TOL",
    "MAX_QUBITS",
    "CanonicalTerm",
    "CoeffVector",
    "MeasurementVector",
    "PauliLabel",
    "PauliString",
    "PureState",
    "Topology",
    "TopologyKind",
    "build_basis_element",
    "build_hamiltonian",
    "density_matrix",
    "fidelity_f1",
    "fidelity_f2",
    "ground_state",
    "measure_from_density",
    "measure_local",
    "partial_trace",
    "project_to_coeffs",
    "qubit_permutation_indices",
    "validate_density_matrix",
]
