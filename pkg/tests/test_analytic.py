"""Tests for the analytic constitutive models and their calibration."""

import numpy as np
import pytest

from viscogp.analytic import (
    USS,
    Branch,
    CoefficientVector,
    Gent,
    GentGent,
    GeneralizedPioletti,
    GeneralizedRivlin,
    MooneyRivlin,
    NeoHookean,
    Pioletti,
    SimoMiehe,
    VolNeoHookean,
    VolOgden,
    Yeoh,
    calibrate,
    contract,
    design_matrix,
    model_from_document,
    resolve_family,
)
from viscogp.continuum import (
    SymTensor3,
    integrity_basis,
    invariants,
    kinematics_from,
    kinematics_from_right_cauchy_green,
    mode_confined_uniaxial,
    mode_isochoric_uniaxial,
    mode_simple_shear,
)
from viscogp.core.config import ExperimentSpec
from viscogp.core.errors import CalibrationError, DomainError
from viscogp.harness.generation import sample_grids

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
DIRECTION = np.array([
    [0.30, 0.10, 0.00],
    [0.10, -0.20, 0.05],
    [0.00, 0.05, 0.10],
])

ELASTIC_MODELS = [
    SimoMiehe(kappa=10.0),
    VolNeoHookean(kappa=7.0),
    VolOgden(kappa=5.0, beta=2.0),
    NeoHookean(A10=0.8),
    MooneyRivlin(A10=1.0, A01=0.5),
    GeneralizedRivlin(A10=1.0, A01=0.5, A11=0.2),
    Yeoh(C1=1.0, C2=0.3),
    Gent(mu=1.0, Jm=10.0),
    GentGent(mu=1.0, C2=0.4, Jm=10.0),
]

VISCOUS_MODELS = [
    Pioletti(eta_prime=2.0),
    GeneralizedPioletti(eta=1.5, beta=1.5),
    USS(k11=1.0, k21=1.0, c21=0.75),
]


def energy_at(model, C, Cdot=None):
    return model.energy(kinematics_from_right_cauchy_green(C, Cdot))


class TestStressFromPotential:
    """Stresses are twice the derivative of their potentials."""

    @pytest.mark.parametrize("model", ELASTIC_MODELS, ids=lambda m: m.family)
    def test_elastic_stress_matches_energy_derivative(self, model):
        state = kinematics_from(F)
        C = state.C.matrix
        h = 1e-6
        slope = (
            energy_at(model, C + h * DIRECTION) - energy_at(model, C - h * DIRECTION)
        ) / (2 * h)
        stress = model.stress(state)
        work = 0.5 * stress.ddot(SymTensor3.from_matrix(DIRECTION))
        assert work == pytest.approx(slope, rel=1e-5)

    @pytest.mark.parametrize("model", VISCOUS_MODELS, ids=lambda m: m.family)
    def test_viscous_stress_matches_potential_rate_derivative(self, model):
        state = kinematics_from(F, FDOT)
        C, Cdot = state.C.matrix, state.Cdot.matrix
        h = 1e-6
        slope = (
            energy_at(model, C, Cdot + h * DIRECTION) - energy_at(model, C, Cdot - h * DIRECTION)
        ) / (2 * h)
        stress = model.stress(state)
        work = 0.5 * stress.ddot(SymTensor3.from_matrix(DIRECTION))
        assert work == pytest.approx(slope, rel=1e-5)

    @pytest.mark.parametrize("model", ELASTIC_MODELS + VISCOUS_MODELS, ids=lambda m: m.family)
    def test_stress_free_reference_state(self, model):
        assert model.stress(kinematics_from(np.eye(3))).norm() == pytest.approx(0.0, abs=1e-12)

    def test_volumetric_stress_along_inverse_C(self):
        model = SimoMiehe(kappa=10.0)
        state = mode_confined_uniaxial(0.8)
        expected = 5.0 * (0.8**2 - 1.0) * np.linalg.inv(state.C.matrix)
        assert np.allclose(model.stress(state).matrix, expected)

    def test_mooney_rivlin_energy_in_uniaxial_tension(self):
        model = MooneyRivlin(A10=1.0, A01=0.5)
        assert model.energy(mode_isochoric_uniaxial(1.25)) == pytest.approx(0.2325, abs=1e-12)

    def test_simo_miehe_coefficient_in_compression(self):
        state = mode_confined_uniaxial(0.9)
        zeta = SimoMiehe(kappa=10.0).coefficients(invariants(state))
        assert zeta.values[0] == pytest.approx(-0.95, abs=1e-12)

    @pytest.mark.parametrize("model", ELASTIC_MODELS + VISCOUS_MODELS, ids=lambda m: m.family)
    def test_stress_is_objective(self, model):
        state = kinematics_from(F, FDOT)
        angle = 0.9
        c, s = np.cos(angle), np.sin(angle)
        Q = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
        stress = model.stress(state)
        rotated = model.stress(state.rotated(Q))
        assert np.allclose(rotated.voigt, stress.voigt, rtol=1e-9, atol=1e-12)

    @pytest.mark.parametrize("model", ELASTIC_MODELS, ids=lambda m: m.family)
    def test_coefficients_recovered_from_stress(self, model):
        """Least squares on the basis tensors returns the model's own coefficients."""
        rng = np.random.default_rng(4)
        for _ in range(20):
            Fi = np.eye(3) + 0.1 * rng.standard_normal((3, 3))
            state = kinematics_from(Fi)
            coefficients = model.coefficients(invariants(state)).values
            A = design_matrix(model.branch, integrity_basis(state), state.J)
            recovered, *_ = np.linalg.lstsq(A, model.stress(state).voigt, rcond=None)
            scale = max(1.0, np.abs(coefficients).max())
            assert np.abs(recovered - coefficients).max() <= 1e-9 * scale


class TestViscousModels:
    """Test dissipation of the viscous potentials."""

    @pytest.mark.parametrize("model", VISCOUS_MODELS, ids=lambda m: m.family)
    def test_dissipation_non_negative_in_loading_and_unloading(self, model):
        for rate in (-50.0, 50.0):
            state = mode_isochoric_uniaxial(1.3, rate)
            assert model.stress(state).ddot(state.Cdot) >= 0.0

    def test_quasi_static_state_has_no_viscous_stress(self):
        model = USS(k11=1.0, k21=1.0, c21=0.75)
        assert model.stress(mode_isochoric_uniaxial(1.3)).norm() == 0.0

    def test_uss_shape_parameter_bounded(self):
        with pytest.raises(ValueError):
            USS(k11=1.0, k21=1.0, c21=1.5)

    @pytest.mark.parametrize("state", [
        kinematics_from(F, FDOT),
        mode_isochoric_uniaxial(1.3, 55.0),
        mode_simple_shear(0.3, 20.0),
    ], ids=["generic", "uniaxial", "shear"])
    def test_uss_matches_closed_form_stress(self, state):
        """Stress written directly from the potential, without the integrity basis."""
        F_, Fdot_ = state.F, state.Fdot
        k11, k21, c21 = 1.3, 0.8, 0.6
        J = np.linalg.det(F_)
        C = F_.T @ F_
        Cdot = Fdot_.T @ F_ + F_.T @ Fdot_
        C_inv = np.linalg.inv(C)
        Jdot = 0.5 * J * np.trace(C_inv @ Cdot)
        Cb = J ** (-2.0 / 3.0) * C
        Cbd = J ** (-2.0 / 3.0) * Cdot - (2.0 / 3.0) * J ** (-5.0 / 3.0) * Jdot * C

        I1 = np.trace(Cb)
        I2 = 0.5 * (I1**2 - np.trace(Cb @ Cb))
        J5 = np.trace(Cb @ Cbd @ Cbd)
        dW = (
            2.0 * k11 * np.sqrt(I1 - 3.0) * Cbd
            + k21 * J5 ** (c21 - 1.0) * np.sqrt(I2 - 3.0) * (Cb @ Cbd + Cbd @ Cb)
        )
        expected = 2.0 * J ** (-2.0 / 3.0) * (dW - np.sum(dW * C) / 3.0 * C_inv)

        stress = USS(k11=k11, k21=k21, c21=c21).stress(state)
        tolerance = 1e-12 * np.abs(expected).max()
        assert np.allclose(stress.matrix, expected, rtol=1e-10, atol=tolerance)


class TestModelDocuments:
    """Test families and JSON documents."""

    @pytest.mark.parametrize("model", ELASTIC_MODELS + VISCOUS_MODELS, ids=lambda m: m.family)
    def test_document_round_trip(self, model):
        assert model_from_document(model.to_document()) == model

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="Unknown model family"):
            resolve_family("ogden_hill")

    def test_branches(self):
        assert SimoMiehe.branch is Branch.VOL
        assert Yeoh.branch is Branch.H_ISO
        assert USS.branch is Branch.V_ISO

    def test_gent_domain(self):
        model = Gent(mu=1.0, Jm=0.1)
        with pytest.raises(DomainError):
            model.stress(mode_isochoric_uniaxial(2.0))

    def test_ogden_beta_nonzero(self):
        with pytest.raises(ValueError):
            VolOgden(kappa=1.0, beta=0.0)


class TestContraction:
    """Test coefficient assembly."""

    def test_contract_matches_design_matrix(self):
        state = kinematics_from(F, FDOT)
        basis = integrity_basis(state)
        values = np.array([0.3, -1.2, 0.5, 2.0, 0.0, -0.7, 0.1])
        stress = contract(CoefficientVector(Branch.V_ISO, values), basis, state.J)
        assert np.allclose(stress.voigt, design_matrix(Branch.V_ISO, basis, state.J) @ values)

    def test_coefficient_count_checked(self):
        with pytest.raises(ValueError):
            CoefficientVector(Branch.H_ISO, np.zeros(3))


class TestCalibration:
    """Test least-squares calibration."""

    def test_recovers_own_parameters(self):
        truth = MooneyRivlin(A10=1.0, A01=0.5)
        states = [mode_isochoric_uniaxial(lam) for lam in np.linspace(0.7, 1.5, 9)]
        states += [mode_simple_shear(g) for g in np.linspace(0.1, 0.5, 5)]
        data = [(s, truth.stress(s)) for s in states]
        fitted = calibrate("mooney_rivlin", data)
        assert fitted.A10 == pytest.approx(1.0, rel=1e-8)
        assert fitted.A01 == pytest.approx(0.5, rel=1e-8)

    def test_recovers_shape_parameter(self):
        truth = VolOgden(kappa=5.0, beta=2.0)
        states = [mode_confined_uniaxial(j) for j in np.linspace(0.6, 1.4, 17)]
        data = [(s, truth.stress(s)) for s in states]
        fitted = calibrate(VolOgden, data)
        assert fitted.beta == pytest.approx(2.0, abs=1e-3)
        assert fitted.kappa == pytest.approx(5.0, rel=1e-3)

    def test_unidentifiable_parameters(self):
        state = kinematics_from(np.eye(3))
        with pytest.raises(CalibrationError) as excinfo:
            calibrate("neo_hookean", [(state, SymTensor3.zeros())])
        assert excinfo.value.directions

    def test_empty_dataset(self):
        with pytest.raises(CalibrationError):
            calibrate("yeoh", [])

    def test_unknown_components(self):
        state = mode_isochoric_uniaxial(1.2)
        with pytest.raises(ValueError):
            calibrate("yeoh", [(state, SymTensor3.zeros())], components="shear")

    def test_preset_baselines(self):
        """Loading-curve baselines calibrated on the preset training grids."""
        expected = {
            "hydrostatic": ("kappa", 11.245),
            "quasistatic": ("C1", 1.464),
        }
        for experiment, (name, value) in expected.items():
            spec = ExperimentSpec.preset(experiment)
            truth = spec.ground_truth.build()
            samples = sample_grids(truth, spec.training)
            fitted = calibrate(
                spec.baseline_family,
                [(s.state, s.truth) for s in samples],
                components=spec.calibration_components,
            )
            assert fitted.params[name] == pytest.approx(value, rel=1e-2)

    def test_yeoh_softening_term(self):
        spec = ExperimentSpec.preset("quasistatic")
        truth = spec.ground_truth.build()
        samples = sample_grids(truth, spec.training)
        fitted = calibrate("yeoh", [(s.state, s.truth) for s in samples], components="loading")
        assert fitted.C2 == pytest.approx(-0.2121, rel=2e-2)
