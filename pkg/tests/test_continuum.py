"""Tests for tensors, kinematics, invariants and deformation modes."""

import numpy as np
import pytest

from viscogp.continuum import (
    DeformationMode,
    SymTensor3,
    deviatoric,
    integrity_basis,
    invariants,
    kinematics_from,
    kinematics_from_right_cauchy_green,
    mode_confined_uniaxial,
    mode_isochoric_uniaxial,
    mode_simple_shear,
    mode_state,
)
from viscogp.core.errors import InvalidDeformationError

GENERIC_F = np.array([
    [1.10, 0.05, 0.02],
    [0.03, 0.95, 0.04],
    [0.01, 0.02, 1.05],
])
GENERIC_FDOT = np.array([
    [0.30, -0.10, 0.05],
    [0.02, -0.20, 0.07],
    [-0.04, 0.01, 0.15],
])


def rotation_z(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def random_states(n: int, seed: int = 0) -> list:
    """States with F near the identity (det F > 0.2) and unit-scale random rates."""
    rng = np.random.default_rng(seed)
    states = []
    while len(states) < n:
        F = np.eye(3) + 0.2 * rng.standard_normal((3, 3))
        if np.linalg.det(F) > 0.2:
            states.append(kinematics_from(F, rng.standard_normal((3, 3))))
    return states


class TestSymTensor3:
    """Test Voigt storage and contractions."""

    def test_from_matrix_keeps_symmetric_part(self):
        t = SymTensor3.from_matrix([[1.0, 2.0, 0.0], [4.0, 5.0, 0.0], [0.0, 0.0, 6.0]])
        assert t.to_list() == [1.0, 5.0, 6.0, 0.0, 0.0, 3.0]
        assert np.array_equal(t.matrix, t.matrix.T)

    def test_ddot_counts_both_shear_halves(self):
        a = SymTensor3.from_matrix(GENERIC_F + GENERIC_F.T)
        b = SymTensor3.from_matrix(GENERIC_FDOT + GENERIC_FDOT.T)
        assert a.ddot(b) == pytest.approx(float(np.sum(a.matrix * b.matrix)))

    def test_identity_norm_and_trace(self):
        identity = SymTensor3.identity()
        assert identity.norm() == pytest.approx(np.sqrt(3.0))
        assert identity.trace() == 3.0

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            SymTensor3(np.zeros(5))

    def test_components_are_read_only(self):
        t = SymTensor3.zeros()
        with pytest.raises(ValueError):
            t.voigt[0] = 1.0


class TestKinematics:
    """Test kinematics_from and the derived tensors."""

    def test_undeformed_state(self):
        state = kinematics_from(np.eye(3))
        assert state.J == pytest.approx(1.0)
        assert state.Jdot == 0.0
        assert state.C.allclose(SymTensor3.identity())
        assert state.is_quasi_static

    def test_non_positive_determinant_rejected(self):
        with pytest.raises(InvalidDeformationError):
            kinematics_from(np.diag([1.0, 1.0, -1.0]))
        with pytest.raises(InvalidDeformationError):
            kinematics_from(np.zeros((3, 3)))

    def test_right_cauchy_green_and_rate(self):
        state = kinematics_from(GENERIC_F, GENERIC_FDOT)
        expected_C = GENERIC_F.T @ GENERIC_F
        expected_Cdot = GENERIC_FDOT.T @ GENERIC_F + GENERIC_F.T @ GENERIC_FDOT
        assert np.allclose(state.C.matrix, expected_C)
        assert np.allclose(state.Cdot.matrix, expected_Cdot)
        assert state.J == pytest.approx(np.linalg.det(GENERIC_F))

    def test_volume_rate_matches_finite_difference(self):
        state = kinematics_from(GENERIC_F, GENERIC_FDOT)
        h = 1e-6
        forward = np.linalg.det(GENERIC_F + h * GENERIC_FDOT)
        backward = np.linalg.det(GENERIC_F - h * GENERIC_FDOT)
        assert state.Jdot == pytest.approx((forward - backward) / (2 * h), rel=1e-6)

    def test_unimodular_part(self):
        state = kinematics_from(GENERIC_F, GENERIC_FDOT)
        assert np.linalg.det(state.Cbar.matrix) == pytest.approx(1.0)

    def test_from_right_cauchy_green_reproduces_C_and_Cdot(self):
        reference = kinematics_from(GENERIC_F, GENERIC_FDOT)
        rebuilt = kinematics_from_right_cauchy_green(reference.C, reference.Cdot)
        assert rebuilt.C.allclose(reference.C, atol=1e-12)
        assert rebuilt.Cdot.allclose(reference.Cdot, atol=1e-12)
        assert rebuilt.J == pytest.approx(reference.J)

    def test_from_right_cauchy_green_rejects_indefinite(self):
        with pytest.raises(InvalidDeformationError):
            kinematics_from_right_cauchy_green(np.diag([1.0, -1.0, 1.0]))


class TestInvariants:
    """Test strain and rate invariants."""

    def test_undeformed_strain_invariants(self):
        inv = invariants(kinematics_from(np.eye(3)))
        assert inv.I1bar == pytest.approx(3.0)
        assert inv.I2bar == pytest.approx(3.0)
        assert inv.J2bar == 0.0

    def test_rate_invariants_coincide_at_identity(self):
        """At F = I the three quadratic rate invariants equal the deviatoric tr(Ċ²)."""
        state = kinematics_from(np.eye(3), np.diag([1.0, 1.0, 0.0]))
        inv = invariants(state)
        Cdot = state.Cdot.matrix
        deviatoric_square = np.trace(Cdot @ Cdot) - np.trace(Cdot) ** 2 / 3.0
        assert deviatoric_square == pytest.approx(8.0 / 3.0)
        assert inv.J2bar == pytest.approx(deviatoric_square)
        assert inv.J5bar == pytest.approx(deviatoric_square)
        assert inv.J7bar == pytest.approx(deviatoric_square)

    def test_invariants_are_objective(self):
        state = kinematics_from(GENERIC_F, GENERIC_FDOT)
        rotated = state.rotated(rotation_z(0.7))
        assert np.allclose(invariants(rotated).as_array(), invariants(state).as_array())

    def test_isochoric_uniaxial_has_unit_volume(self):
        inv = invariants(mode_isochoric_uniaxial(1.4, 25.0))
        assert inv.J == pytest.approx(1.0)
        assert inv.I1bar == pytest.approx(1.4**2 + 2.0 / 1.4)

    def test_uniaxial_strain_invariants(self):
        inv = invariants(mode_isochoric_uniaxial(1.25))
        assert inv.I1bar == pytest.approx(3.1625, abs=1e-12)
        assert inv.I2bar == pytest.approx(3.14, abs=1e-12)

    def test_shear_strain_invariants(self):
        inv = invariants(mode_simple_shear(0.5))
        assert inv.I1bar == pytest.approx(3.25, abs=1e-12)
        assert inv.I2bar == pytest.approx(3.25, abs=1e-12)

    def test_odd_rate_invariants_vanish_at_identity(self):
        """At F = I, C̄̇ is traceless: J̄₁ = J̄₄ = J̄₆ = 0 and J̄₂ = J̄₅ = J̄₇."""
        rng = np.random.default_rng(1)
        for _ in range(100):
            inv = invariants(kinematics_from(np.eye(3), rng.standard_normal((3, 3))))
            scale = max(1.0, inv.J2bar)
            assert abs(inv.J1bar) <= 1e-9 * scale
            assert abs(inv.J4bar) <= 1e-9 * scale
            assert abs(inv.J6bar) <= 1e-9 * scale
            assert inv.J5bar == pytest.approx(inv.J2bar, rel=1e-9, abs=1e-12)
            assert inv.J7bar == pytest.approx(inv.J2bar, rel=1e-9, abs=1e-12)

    def test_cayley_hamilton_closure(self):
        for state in random_states(200):
            inv = invariants(state)
            Cb = state.Cbar.matrix
            residual = Cb @ Cb @ Cb - inv.I1bar * Cb @ Cb + inv.I2bar * Cb - np.eye(3)
            assert np.abs(residual).max() <= 1e-9 * max(1.0, np.abs(Cb).max() ** 3)

            D = state.Cbardot.matrix
            second = 0.5 * (inv.J1bar**2 - inv.J2bar)
            residual = D @ D @ D - inv.J1bar * D @ D + second * D - inv.J3bar * np.eye(3)
            assert np.abs(residual).max() <= 1e-9 * max(1.0, np.abs(D).max() ** 3)


class TestIntegrityBasis:
    """Test the eight basis tensors."""

    def test_first_tensor_is_inverse_C(self):
        state = kinematics_from(GENERIC_F, GENERIC_FDOT)
        basis = integrity_basis(state)
        assert np.allclose(basis[1].matrix, np.linalg.inv(state.C.matrix))

    def test_deviatoric_tensors_are_orthogonal_to_C(self):
        state = kinematics_from(GENERIC_F, GENERIC_FDOT)
        basis = integrity_basis(state)
        for k in range(2, 9):
            assert basis[k].ddot(state.C) == pytest.approx(0.0, abs=1e-10)

    def test_deviatoric_tensors_vanish_at_identity(self):
        basis = integrity_basis(kinematics_from(np.eye(3)))
        for k in range(2, 9):
            assert basis[k].norm() == pytest.approx(0.0, abs=1e-12)

    def test_index_is_one_based(self):
        basis = integrity_basis(kinematics_from(GENERIC_F))
        with pytest.raises(IndexError):
            basis[0]
        with pytest.raises(IndexError):
            basis[9]

    def test_degenerate_rate_flagged(self):
        assert integrity_basis(mode_simple_shear(0.3, 10.0)).g6_degenerate
        assert integrity_basis(mode_isochoric_uniaxial(1.2)).g6_degenerate
        assert not integrity_basis(kinematics_from(GENERIC_F, GENERIC_FDOT)).g6_degenerate

    def test_deviator_of_C_is_traceless_against_C(self):
        state = kinematics_from(GENERIC_F)
        dev = deviatoric(SymTensor3.identity(), state.C)
        assert dev.ddot(state.C) == pytest.approx(0.0, abs=1e-12)

    def test_deviator_orthogonal_to_C_for_random_pairs(self):
        rng = np.random.default_rng(2)
        for state in random_states(200, seed=3):
            Z = SymTensor3.from_matrix(rng.standard_normal((3, 3)))
            dev = deviatoric(Z, state.C)
            assert abs(dev.ddot(state.C)) <= 1e-9 * Z.norm() * state.C.norm()

    def test_deviator_at_identity_removes_mean_trace(self):
        Z = SymTensor3.from_matrix(GENERIC_FDOT)
        expected = Z.matrix - Z.trace() / 3.0 * np.eye(3)
        assert np.allclose(deviatoric(Z, SymTensor3.identity()).matrix, expected, atol=1e-14)

    def test_g6_flagged_at_identity(self):
        assert integrity_basis(kinematics_from(np.eye(3))).g6_degenerate


class TestModes:
    """Test the canonical deformation modes."""

    def test_confined_uniaxial(self):
        state = mode_confined_uniaxial(0.8)
        assert state.J == pytest.approx(0.8)
        assert state.is_quasi_static

    def test_confined_rejects_non_positive_volume(self):
        with pytest.raises(InvalidDeformationError):
            mode_confined_uniaxial(0.0)

    def test_isochoric_uniaxial_rate(self):
        lam, lam_dot = 1.3, 40.0
        state = mode_isochoric_uniaxial(lam, lam_dot)
        assert state.Fdot[0, 0] == pytest.approx(lam_dot)
        assert state.Jdot == pytest.approx(0.0, abs=1e-10)

    def test_simple_shear(self):
        gamma, gamma_dot = 0.4, 3.0
        state = mode_simple_shear(gamma, gamma_dot)
        expected = np.array([[1.0, gamma, 0.0], [gamma, 1.0 + gamma**2, 0.0], [0.0, 0.0, 1.0]])
        assert np.allclose(state.C.matrix, expected)
        assert state.Cdot.matrix[1, 1] == pytest.approx(2.0 * gamma * gamma_dot)

    def test_simple_shear_rate_components(self):
        state = mode_simple_shear(0.25, 145.0)
        assert state.Cdot.matrix[0, 1] == pytest.approx(145.0)
        assert state.Cdot.matrix[1, 1] == pytest.approx(72.5)

    def test_isochoric_modes_keep_unit_volume(self):
        states = [mode_isochoric_uniaxial(lam, -145.0) for lam in np.linspace(0.5, 1.75, 26)]
        states += [mode_simple_shear(gamma, 145.0) for gamma in np.linspace(0.0, 0.5, 11)]
        for state in states:
            assert abs(state.J - 1.0) <= 1e-12

    def test_dispatch(self):
        state = mode_state(DeformationMode.UNIAXIAL, 1.2, 5.0)
        assert np.allclose(state.F, mode_isochoric_uniaxial(1.2, 5.0).F)
        assert mode_state("confined", 0.9).J == pytest.approx(0.9)

    def test_confined_rejects_rate(self):
        with pytest.raises(InvalidDeformationError):
            mode_state(DeformationMode.CONFINED, 0.9, 1.0)
