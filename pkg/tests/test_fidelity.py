"""
Tests for the f1 and f2 fidelity measures
"""

import numpy as np
import pytest

from localqst.core import density_matrix, fidelity_f1, fidelity_f2
from localqst.errors import DimensionError, InvalidStateError, NotPSDError

from .helpers import random_mixed_state, random_state

ZERO = np.array([[1.0, 0.0], [0.0, 0.0]])
MIXED = np.eye(2) / 2


class TestFidelities:
    """Test fidelity_f1 / fidelity_f2"""

    def test_pure_state_identity(self):
        for seed in range(100):
            a = density_matrix(random_state(8, 2 * seed))
            b = density_matrix(random_state(8, 2 * seed + 1))
            f2 = fidelity_f2(a, b)
            assert fidelity_f1(a, b) == pytest.approx(f2**2, abs=1e-10)

    def test_pure_overlap(self):
        psi = random_state(4, 1)
        phi = random_state(4, 2)
        assert fidelity_f2(density_matrix(psi), density_matrix(phi)) == pytest.approx(
            abs(np.vdot(psi, phi)), abs=1e-12
        )

    def test_zero_vs_maximally_mixed(self):
        assert fidelity_f1(ZERO, MIXED) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
        assert fidelity_f2(ZERO, MIXED) == pytest.approx(1 / np.sqrt(2), abs=1e-12)

    def test_self_fidelity(self):
        rho = random_mixed_state(8, 3)
        assert fidelity_f1(rho, rho) == pytest.approx(1.0, abs=1e-12)
        assert fidelity_f2(rho, rho) == pytest.approx(1.0, abs=1e-10)

    def test_symmetry_on_mixed_states(self):
        a = random_mixed_state(8, 5)
        b = random_mixed_state(8, 6)
        assert fidelity_f2(a, b) == pytest.approx(fidelity_f2(b, a), abs=1e-10)
        assert fidelity_f1(a, b) == pytest.approx(fidelity_f1(b, a), abs=1e-12)

    def test_orthogonal_states(self):
        one = np.array([[0.0, 0.0], [0.0, 1.0]])
        assert fidelity_f1(ZERO, one) == 0.0
        assert fidelity_f2(ZERO, one) == pytest.approx(0.0, abs=1e-12)

    def test_f1_accepts_non_psd(self):
        # unphysical tomography output: Hermitian, unit trace, negative eigenvalue
        raw = np.array([[1.1, 0.0], [0.0, -0.1]])
        assert np.isfinite(fidelity_f1(raw, ZERO))
        with pytest.raises(NotPSDError):
            fidelity_f2(raw, MIXED)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            fidelity_f1(ZERO, np.eye(4) / 4)

    def test_zero_matrix(self):
        with pytest.raises(InvalidStateError):
            fidelity_f1(np.zeros((2, 2)), ZERO)

    def test_f2_needs_unit_trace(self):
        with pytest.raises(InvalidStateError):
            fidelity_f2(np.eye(2), ZERO)
