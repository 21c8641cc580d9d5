"""Tests for coefficient extraction, surrogate training and the classical baseline."""

import numpy as np
import pytest

from viscogp.analytic import USS, Branch, CoefficientVector, MooneyRivlin, SimoMiehe, contract
from viscogp.continuum import (
    SymTensor3,
    integrity_basis,
    invariants,
    kinematics_from,
    mode_confined_uniaxial,
    mode_isochoric_uniaxial,
    mode_simple_shear,
)
from viscogp.core.config import GprSettings
from viscogp.core.errors import DatasetFormatError, ExtractionError
from viscogp.gpr import constraint_values
from viscogp.surrogate import (
    BranchDataset,
    ClassicalModel,
    CompositeSurrogate,
    build_star_dataset,
    dataset_hash,
    dissipation,
    dissipation_constraints,
    dissipation_functional,
    extract_coefficients,
    model_from_envelope,
    predict_stress,
    train_classical,
    train_surrogate,
)
from viscogp.surrogate.extraction import G6_COLUMN

F = np.array([
    [1.10, 0.05, 0.02],
    [0.03, 0.95, 0.04],
    [0.01, 0.02, 1.05],
])
FDOT = np.array([
    [0.30, -0.10, 0.05],
    [0.02, -0.20, 0.07],
    [-0.04, 0.01, 0.15],
])

SETTINGS = GprSettings(n_restarts=4)


def rotation_x(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def branch_data(model, states) -> BranchDataset:
    return BranchDataset(model.branch, tuple((s, model.stress(s)) for s in states))


def mooney_rivlin_data() -> BranchDataset:
    states = [mode_isochoric_uniaxial(lam) for lam in np.linspace(1.05, 1.3, 8)]
    return branch_data(MooneyRivlin(A10=1.0, A01=0.5), states)


def uss_data() -> BranchDataset:
    states = [
        mode_isochoric_uniaxial(lam, rate)
        for rate in (20.0, 60.0)
        for lam in np.linspace(1.05, 1.4, 6)
    ]
    return branch_data(USS(k11=1.0, k21=1.0, c21=0.75), states)


class TestExtraction:
    """Test coefficient extraction from stresses."""

    def test_recovers_hyperelastic_coefficients(self):
        model = MooneyRivlin(A10=1.0, A01=0.5)
        state = kinematics_from(F)
        result = extract_coefficients(Branch.H_ISO, state, model.stress(state))
        expected = model.coefficients(invariants(state))
        assert np.allclose(result.coefficients.values, expected.values, rtol=1e-8)
        assert result.residual < 1e-10

    def test_recovers_volumetric_coefficient(self):
        model = SimoMiehe(kappa=10.0)
        state = mode_confined_uniaxial(0.85)
        result = extract_coefficients(Branch.VOL, state, model.stress(state))
        assert result.coefficients.values[0] == pytest.approx(5.0 * (0.85**2 - 1.0))

    def test_viscous_stress_reconstructed(self):
        model = USS(k11=1.0, k21=1.0, c21=0.75)
        state = kinematics_from(F, FDOT)
        stress = model.stress(state)
        result = extract_coefficients(Branch.V_ISO, state, stress)
        rebuilt = contract(result.coefficients, integrity_basis(state), state.J)
        assert rebuilt.allclose(stress, rtol=1e-8, atol=1e-12)
        assert result.residual < 1e-8

    def test_degenerate_g6_dropped(self):
        model = USS(k11=1.0, k21=1.0, c21=0.75)
        state = mode_simple_shear(0.3, 10.0)
        result = extract_coefficients(Branch.V_ISO, state, model.stress(state))
        assert result.coefficients.values[G6_COLUMN] == 0.0

    def test_vanishing_basis_with_stress(self):
        state = kinematics_from(np.eye(3))
        with pytest.raises(ExtractionError):
            extract_coefficients(Branch.H_ISO, state, SymTensor3.identity())

    def test_vanishing_basis_without_stress(self):
        state = kinematics_from(np.eye(3))
        result = extract_coefficients(Branch.H_ISO, state, SymTensor3.zeros())
        assert np.array_equal(result.coefficients.values, np.zeros(2))


class TestDatasets:
    """Test branch datasets and their invariant form."""

    def test_viscous_records_need_rate(self):
        state = mode_isochoric_uniaxial(1.2)
        with pytest.raises(DatasetFormatError):
            BranchDataset(Branch.V_ISO, ((state, SymTensor3.zeros()),))

    def test_elastic_records_must_be_quasi_static(self):
        state = mode_isochoric_uniaxial(1.2, 5.0)
        with pytest.raises(DatasetFormatError):
            BranchDataset(Branch.H_ISO, ((state, SymTensor3.zeros()),))

    def test_star_dataset_shapes(self):
        star = build_star_dataset(uss_data())
        assert star.inputs.shape == (12, 5)
        assert star.outputs.shape == (12, 7)
        assert star.input_names == ("I1bar", "I2bar", "J1bar", "J4bar", "J6bar")
        assert np.all(star.residuals < 1e-8)

    def test_reference_row_appended_once(self):
        star = build_star_dataset(mooney_rivlin_data())
        assert not star.has_reference_row()
        with_reference = star.with_reference_row()
        assert len(with_reference) == len(star) + 1
        assert np.allclose(with_reference.inputs[-1], [3.0, 3.0])
        assert np.array_equal(with_reference.outputs[-1], [0.0, 0.0])
        assert with_reference.with_reference_row() is with_reference

    def test_extraction_failure_names_record(self):
        states = [mode_isochoric_uniaxial(1.2), kinematics_from(np.eye(3))]
        stresses = [SymTensor3.zeros(), SymTensor3.identity()]
        data = BranchDataset(Branch.H_ISO, tuple(zip(states, stresses)))
        with pytest.raises(ExtractionError, match="Record 1"):
            build_star_dataset(data)

    def test_hash(self):
        data = mooney_rivlin_data()
        assert len(dataset_hash(data)) == 12
        assert dataset_hash(data) == dataset_hash(mooney_rivlin_data())
        shorter = BranchDataset(data.branch, data.records[:-1])
        assert dataset_hash(shorter) != dataset_hash(data)


class TestDissipation:
    """Test the dissipation functional."""

    def test_functional_matches_contracted_stress(self):
        state = kinematics_from(F, FDOT)
        values = np.array([0.4, -0.3, 1.1, 0.7, 0.0, -0.2, 0.05])
        stress = contract(CoefficientVector(Branch.V_ISO, values), integrity_basis(state), state.J)
        assert dissipation_functional(state) @ values == pytest.approx(
            dissipation(stress, state.Cdot)
        )

    def test_quasi_static_states_give_no_constraints(self):
        with pytest.raises(ValueError):
            dissipation_constraints([mode_isochoric_uniaxial(1.2)])


class TestSurrogate:
    """Test branch surrogates."""

    def test_reproduces_training_stresses(self):
        data = mooney_rivlin_data()
        model = train_surrogate(Branch.H_ISO, build_star_dataset(data), settings=SETTINGS)
        scale = data.stress_scale()
        for state, truth in data.records:
            assert (model.predict_stress(state) - truth).norm() <= 1e-6 * scale

    def test_stress_is_objective(self):
        data = mooney_rivlin_data()
        model = train_surrogate(Branch.H_ISO, build_star_dataset(data), settings=SETTINGS)
        state = mode_isochoric_uniaxial(1.17)
        rotated = state.rotated(rotation_x(1.1))
        assert model.predict_stress(rotated).allclose(model.predict_stress(state), atol=1e-10)

    def test_isochoric_surrogates_stress_free_at_reference(self):
        reference = kinematics_from(np.eye(3))
        for data in (mooney_rivlin_data(), uss_data()):
            model = train_surrogate(data.branch, build_star_dataset(data), settings=SETTINGS)
            assert model.predict_stress(reference).norm() <= 1e-3 * data.stress_scale()

    def test_constraints_rejected_for_elastic_branch(self):
        star = build_star_dataset(mooney_rivlin_data())
        constraints = dissipation_constraints(uss_data().states)
        with pytest.raises(ValueError):
            train_surrogate(Branch.H_ISO, star, constraints=constraints)

    def test_branch_mismatch(self):
        star = build_star_dataset(mooney_rivlin_data())
        with pytest.raises(ValueError):
            train_surrogate(Branch.VOL, star)

    def test_viscous_surrogate_is_dissipative(self):
        data = uss_data()
        model = train_surrogate(Branch.V_ISO, build_star_dataset(data), settings=SETTINGS)
        assert model.constrained
        values = constraint_values(model.gp, dissipation_constraints(data.states))
        assert values.min() >= -1e-8

    def test_envelope_round_trip(self):
        data = mooney_rivlin_data()
        model = train_surrogate(Branch.H_ISO, build_star_dataset(data), settings=SETTINGS)
        restored = model_from_envelope(model.to_dict())
        state = mode_isochoric_uniaxial(1.22)
        assert restored.predict_stress(state).allclose(model.predict_stress(state))
        assert restored.provenance["dataset_hash"] == dataset_hash(data)

    def test_composite_sums_branches(self):
        vol_states = [mode_confined_uniaxial(j) for j in np.linspace(0.8, 1.0, 6)]
        vol = train_surrogate(
            Branch.VOL,
            build_star_dataset(branch_data(SimoMiehe(kappa=10.0), vol_states)),
            settings=SETTINGS,
        )
        iso = train_surrogate(
            Branch.H_ISO, build_star_dataset(mooney_rivlin_data()), settings=SETTINGS
        )
        composite = CompositeSurrogate({Branch.VOL: vol, Branch.H_ISO: iso})
        state = mode_isochoric_uniaxial(1.15)
        expected = vol.predict_stress(state) + iso.predict_stress(state)
        assert composite.predict_stress(state).allclose(expected)
        restored = model_from_envelope(composite.to_dict())
        assert restored.predict_stress(state).allclose(expected)


class TestClassical:
    """Test the black-box strain-to-stress baseline."""

    def test_reproduces_training_stresses(self):
        data = mooney_rivlin_data()
        model = train_classical(data, settings=SETTINGS)
        assert not model.rate_dependent
        scale = data.stress_scale()
        for state, truth in data.records:
            assert (model.predict_stress(state) - truth).norm() <= 1e-6 * scale

    def test_viscous_data_is_rate_dependent(self):
        model = train_classical(uss_data(), settings=SETTINGS)
        assert model.rate_dependent
        assert model.gp.n_inputs == 12

    def test_input_width_checked(self):
        model = train_classical(mooney_rivlin_data(), settings=SETTINGS)
        with pytest.raises(DatasetFormatError):
            ClassicalModel(gp=model.gp, rate_dependent=True)

    def test_envelope_round_trip(self):
        model = train_classical(mooney_rivlin_data(), settings=SETTINGS)
        restored = model_from_envelope(model.to_dict())
        state = mode_isochoric_uniaxial(1.22)
        assert restored.predict_stress(state).allclose(model.predict_stress(state))


class TestEnvelopes:
    """Test model document dispatch."""

    def test_analytic_document(self):
        model = model_from_envelope({"family": "simo_miehe", "params": {"kappa": 10.0}})
        state = mode_confined_uniaxial(0.9)
        assert predict_stress(model, state).allclose(SimoMiehe(kappa=10.0).stress(state))

    def test_unknown_kind(self):
        with pytest.raises(DatasetFormatError):
            model_from_envelope({"kind": "spline", "version": 1})

    def test_unsupported_version(self):
        with pytest.raises(DatasetFormatError):
            model_from_envelope({"kind": "surrogate", "version": 99})
