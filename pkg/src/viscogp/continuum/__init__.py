"""Finite-strain kinematics, invariants and the integrity basis."""

from viscogp.continuum.kinematics import (
    DeformationState,
    IntegrityBasis,
    InvariantSet,
    deviatoric,
    integrity_basis,
    invariants,
    kinematics_from,
    kinematics_from_right_cauchy_green,
)
from viscogp.continuum.modes import (
    DeformationMode,
    mode_confined_uniaxial,
    mode_isochoric_uniaxial,
    mode_simple_shear,
    mode_state,
)
from viscogp.continuum.tensors import VOIGT_LABELS, SymTensor3, Tensor3

__all__ = [
    "SymTensor3",
    "Tensor3",
    "VOIGT_LABELS",
    "DeformationState",
    "InvariantSet",
    "IntegrityBasis",
    "kinematics_from",
    "kinematics_from_right_cauchy_green",
    "invariants",
    "deviatoric",
    "integrity_basis",
    "DeformationMode",
    "mode_confined_uniaxial",
    "mode_isochoric_uniaxial",
    "mode_simple_shear",
    "mode_state",
]
