"""
Ground states, reduced density matrices and local Pauli expectations
"""

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple, Union

import numpy as np

from ..errors import (
    DegenerateGroundStateError,
    DimensionError,
    InvalidStateError,
)
from .pauli import PauliLabel
from .topology import MAX_QUBITS, Topology

DEFAULT_GAP_TOL = 1e-6
NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-10
PHASE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized ground state with its energy and spectral gap"""

    amplitudes: np.ndarray
    energy: float
    gap: float

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    def density_matrix(self) -> np.ndarray:
        return density_matrix(self.amplitudes)


@dataclass(frozen=True, eq=False)
class MeasurementVector:
    """Deduplicated 1- and 2-body Pauli expectations in canonical order"""

    topology: Topology
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (self.topology.measurement_dim,):
            raise DimensionError(
                f"{self.topology} has {self.topology.measurement_dim} measurements, "
                f"got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)) or np.any(np.abs(values) > 1 + NORM_TOL):
            raise InvalidStateError("expectation values must lie in [-1, 1]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


def _qubit_count(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def _fix_global_phase(amplitudes: np.ndarray) -> np.ndarray:
    """Rotate so the first significant amplitude is real and positive"""
    significant = np.flatnonzero(np.abs(amplitudes) > PHASE_TOL)
    if significant.size == 0:
        raise InvalidStateError("state vector is zero")
    k = significant[0]
    magnitude = abs(amplitudes[k])
    fixed = amplitudes * (np.conj(amplitudes[k]) / magnitude)
    fixed[k] = magnitude
    return fixed


def ground_state(hamiltonian: np.ndarray, gap_tol: float = DEFAULT_GAP_TOL) -> PureState:
    """
    Lowest eigenvector of a Hermitian matrix

    The N x N complex problem is solved as the 2N x 2N real symmetric problem
    [[Re H, -Im H], [Im H, Re H]]. Each eigenvalue of H appears twice there,
    with eigenvectors [x; y] and [-y; x] both mapping to x + iy up to phase.
    """
    hamiltonian = np.asarray(hamiltonian, dtype=np.complex128)
    if hamiltonian.ndim != 2 or hamiltonian.shape[0] != hamiltonian.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {hamiltonian.shape}")
    dim = hamiltonian.shape[0]
    if _qubit_count(dim) > MAX_QUBITS:
        raise DimensionError(f"dense diagonalization is limited to {MAX_QUBITS} qubits")
    scale = max(1.0, float(np.max(np.abs(hamiltonian))))
    if np.max(np.abs(hamiltonian - hamiltonian.conj().T)) > HERMITIAN_TOL * scale:
        raise InvalidStateError("Hamiltonian is not Hermitian")

    real, imag = hamiltonian.real, hamiltonian.imag
    embedded = np.block([[real, -imag], [imag, real]])
    eigenvalues, eigenvectors = np.linalg.eigh(embedded)

    gap = max(float(eigenvalues[2] - eigenvalues[0]), 0.0)
    if gap < gap_tol:
        raise DegenerateGroundStateError(gap, gap_tol)

    vector = eigenvectors[:, 0]
    amplitudes = vector[:dim] + 1j * vector[dim:]
    amplitudes /= np.linalg.norm(amplitudes)
    amplitudes = _fix_global_phase(amplitudes)
    amplitudes.setflags(write=False)
    return PureState(amplitudes=amplitudes, energy=float(eigenvalues[0]), gap=gap)


def density_matrix(amplitudes: np.ndarray) -> np.ndarray:
    """|psi><psi|"""
    amplitudes = np.asarray(amplitudes, dtype=np.complex128)
    return np.outer(amplitudes, amplitudes.conj())


def validate_density_matrix(rho: np.ndarray, unit_trace: bool = True) -> np.ndarray:
    """Check shape, Hermiticity and (optionally) unit trace; positivity is not required"""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {rho.shape}")
    _qubit_count(rho.shape[0])
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise InvalidStateError("density matrix is not Hermitian")
    if unit_trace and abs(np.trace(rho) - 1.0) > HERMITIAN_TOL:
        raise InvalidStateError(f"density matrix has trace {np.trace(rho).real:.12g}")
    return rho


def partial_trace(rho: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on the qubits in ``keep`` (strictly increasing)"""
    rho = validate_density_matrix(rho)
    n = _qubit_count(rho.shape[0])
    keep = tuple(int(q) for q in keep)
    if not keep or any(q < 0 or q >= n for q in keep):
        raise DimensionError(f"qubits {keep} out of range for {n} qubits")
    if any(a >= b for a, b in zip(keep, keep[1:])):
        raise ValueError(f"qubits to keep must be strictly increasing, got {keep}")

    tensor = rho.reshape((2,) * (2 * n))
    row_labels = list(range(n))
    col_labels = [q if q not in keep else n + q for q in range(n)]
    out_labels = list(keep) + [n + q for q in keep]
    reduced = np.einsum(tensor, row_labels + col_labels, out_labels)
    size = 1 << len(keep)
    return reduced.reshape(size, size)


def _check_state(amplitudes: np.ndarray, topology: Topology) -> np.ndarray:
    amplitudes = np.asarray(amplitudes, dtype=np.complex128)
    if amplitudes.shape != (topology.dim,):
        raise DimensionError(
            f"{topology} expects a state of dimension {topology.dim}, "
            f"got shape {amplitudes.shape}"
        )
    norm = np.linalg.norm(amplitudes)
    if abs(norm - 1.0) > NORM_TOL:
        raise InvalidStateError(f"state is not normalized (norm {norm:.12g})")
    return amplitudes


def _real_part(value: complex) -> float:
    if abs(value.imag) > NORM_TOL:
        raise InvalidStateError(f"expectation has imaginary part {value.imag:.3e}")
    return value.real


def measure_local(
    psi: Union[PureState, np.ndarray], topology: Topology
) -> MeasurementVector:
    """<psi|B|psi> for every canonical term, site-averaged on shared slots"""
    amplitudes = psi.amplitudes if isinstance(psi, PureState) else psi
    amplitudes = _check_state(amplitudes, topology)
    values = np.empty(topology.measurement_dim, dtype=np.float64)
    for k, term in enumerate(topology.terms):
        total = sum(_real_part(s.expectation(amplitudes)) for s in term.strings)
        values[k] = total / len(term.strings)
    return MeasurementVector(topology, values)


def measure_from_density(rho: np.ndarray, topology: Topology) -> MeasurementVector:
    """Same vector as ``measure_local``, computed as Tr(RDM B) on each support"""
    rho = validate_density_matrix(rho)
    if rho.shape[0] != topology.dim:
        raise DimensionError(f"{topology} expects dimension {topology.dim}")

    reduced: Dict[Tuple[int, ...], np.ndarray] = {}
    values = np.empty(topology.measurement_dim, dtype=np.float64)
    for k, term in enumerate(topology.terms):
        total = 0.0
        for string in term.strings:
            sites, labels = string.support
            if sites not in reduced:
                reduced[sites] = partial_trace(rho, sites)
            operator = _kron_labels(labels)
            total += _real_part(complex(np.trace(reduced[sites] @ operator)))
        values[k] = total / len(term.strings)
    return MeasurementVector(topology, values)


def _kron_labels(labels: Sequence[PauliLabel]) -> np.ndarray:
    operator = np.ones((1, 1), dtype=np.complex128)
    for label in labels:
        operator = np.kron(operator, label.matrix)
    return operator
