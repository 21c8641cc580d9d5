"""Closed-form constitutive models used as ground truth and baselines."""

from viscogp.analytic.calibration import calibrate
from viscogp.analytic.coefficients import (
    COEFFICIENT_NAMES,
    Branch,
    CoefficientVector,
    contract,
    design_matrix,
)
from viscogp.analytic.models import (
    FAMILIES,
    USS,
    ConstitutiveModel,
    Gent,
    GentGent,
    GeneralizedPioletti,
    GeneralizedRivlin,
    HyperelasticModel,
    MooneyRivlin,
    NeoHookean,
    Pioletti,
    SimoMiehe,
    ViscousModel,
    VolNeoHookean,
    VolOgden,
    VolumetricModel,
    Yeoh,
    model_from_document,
    resolve_family,
)

__all__ = [
    "Branch",
    "CoefficientVector",
    "COEFFICIENT_NAMES",
    "contract",
    "design_matrix",
    "ConstitutiveModel",
    "VolumetricModel",
    "HyperelasticModel",
    "ViscousModel",
    "SimoMiehe",
    "VolNeoHookean",
    "VolOgden",
    "NeoHookean",
    "MooneyRivlin",
    "GeneralizedRivlin",
    "Yeoh",
    "Gent",
    "GentGent",
    "Pioletti",
    "GeneralizedPioletti",
    "USS",
    "FAMILIES",
    "resolve_family",
    "model_from_document",
    "calibrate",
]
