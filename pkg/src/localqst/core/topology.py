"""
Interaction topologies and the canonical term ordering

The canonical order is shared by coefficient vectors, measurement vectors,
dataset files and network inputs/outputs:

1. single-body terms sorted by (qubit, Pauli) with Pauli in X < Y < Z;
2. two-body terms sorted by (edge, m, n), the term on edge (i, j) being
   sigma_m on qubit i times sigma_n on qubit j.

For the translation-invariant ring each slot is shared: slot (a) multiplies
sum_i sigma_a^(i) and slot (m, n) multiplies sum_i sigma_m^(i) sigma_n^(i+1 mod n).
"""

from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Any, Dict, List, NamedTuple, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .pauli import MEASURED_PAULIS, PauliLabel, PauliString

# dense exact diagonalization stays below this size
MAX_QUBITS = 10


class TopologyKind(str, Enum):
    """Interaction patterns"""

    FULL = "full"
    CHAIN = "chain"
    TI_RING = "ti_ring"


class CanonicalTerm(NamedTuple):
    """One slot of the canonical ordering"""

    sites: Tuple[int, ...]
    paulis: Tuple[PauliLabel, ...]
    strings: Tuple[PauliString, ...]

    @property
    def name(self) -> str:
        return "".join(f"{p.name}{s}" for s, p in zip(self.sites, self.paulis))


class Topology(BaseModel):
    """Which qubits interact, and therefore which coefficients exist"""

    model_config = ConfigDict(frozen=True)

    kind: TopologyKind
    n_qubits: int = Field(ge=1, le=MAX_QUBITS)

    @model_validator(mode="after")
    def _ring_needs_three_sites(self) -> "Topology":
        if self.kind == TopologyKind.TI_RING and self.n_qubits < 3:
            raise ValueError("a translation-invariant ring needs at least 3 qubits")
        return self

    @classmethod
    def full(cls, n_qubits: int) -> "Topology":
        return cls(kind=TopologyKind.FULL, n_qubits=n_qubits)

    @classmethod
    def chain(cls, n_qubits: int) -> "Topology":
        return cls(kind=TopologyKind.CHAIN, n_qubits=n_qubits)

    @classmethod
    def ti_ring(cls, n_qubits: int) -> "Topology":
        return cls(kind=TopologyKind.TI_RING, n_qubits=n_qubits)

    @classmethod
    def from_descriptor(cls, descriptor: Dict[str, Any]) -> "Topology":
        return cls(kind=descriptor["kind"], n_qubits=descriptor["n"])

    def descriptor(self) -> Dict[str, Any]:
        """Compact form used in file headers"""
        return {"kind": self.kind.value, "n": self.n_qubits}

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @property
    def edges(self) -> List[Tuple[int, int]]:
        n = self.n_qubits
        if self.kind == TopologyKind.FULL:
            return list(combinations(range(n), 2))
        if self.kind == TopologyKind.CHAIN:
            return [(i, i + 1) for i in range(n - 1)]
        return [(i, (i + 1) % n) for i in range(n)]

    @property
    def coeff_dim(self) -> int:
        n = self.n_qubits
        if self.kind == TopologyKind.FULL:
            return 3 * n + 9 * (n * (n - 1) // 2)
        if self.kind == TopologyKind.CHAIN:
            return 3 * n + 9 * (n - 1)
        return 12

    @property
    def measurement_dim(self) -> int:
        # one expectation per coefficient slot
        return self.coeff_dim

    @property
    def terms(self) -> Tuple[CanonicalTerm, ...]:
        return canonical_terms(self)

    def __str__(self) -> str:
        return f"{self.kind.value}-{self.n_qubits}"


@lru_cache(maxsize=None)
def canonical_terms(topology: Topology) -> Tuple[CanonicalTerm, ...]:
    """All coefficient slots of a topology in canonical order"""
    n = topology.n_qubits
    shared = topology.kind == TopologyKind.TI_RING
    terms: List[CanonicalTerm] = []

    if shared:
        for a in MEASURED_PAULIS:
            strings = tuple(PauliString.on_sites(n, (i,), (a,)) for i in range(n))
            terms.append(CanonicalTerm((0,), (a,), strings))
        for m in MEASURED_PAULIS:
            for p in MEASURED_PAULIS:
                strings = tuple(
                    PauliString.on_sites(n, edge, (m, p)) for edge in topology.edges
                )
                terms.append(CanonicalTerm((0, 1), (m, p), strings))
    else:
        for i in range(n):
            for a in MEASURED_PAULIS:
                terms.append(
                    CanonicalTerm((i,), (a,), (PauliString.on_sites(n, (i,), (a,)),))
                )
        for edge in topology.edges:
            for m in MEASURED_PAULIS:
                for p in MEASURED_PAULIS:
                    terms.append(
                        CanonicalTerm(
                            edge, (m, p), (PauliString.on_sites(n, edge, (m, p)),)
                        )
                    )

    if len(terms) != topology.coeff_dim:
        raise AssertionError(f"{topology}: built {len(terms)} terms")
    return tuple(terms)
