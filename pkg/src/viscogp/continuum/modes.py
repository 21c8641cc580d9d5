"""Canonical homogeneous deformation modes used for data generation."""

from enum import Enum

import numpy as np

from viscogp.continuum.kinematics import DeformationState, kinematics_from
from viscogp.core.errors import InvalidDeformationError


class DeformationMode(str, Enum):
    """Homogeneous loading modes with one strain coordinate and its rate."""

    CONFINED = "confined"
    UNIAXIAL = "uniaxial"
    SHEAR = "shear"


def mode_confined_uniaxial(j: float) -> DeformationState:
    """Confined uniaxial deformation F = diag(j, 1, 1) with det F = j.

    Args:
        j: Target volume ratio.

    Raises:
        InvalidDeformationError: If j is not positive.
    """
    if j <= 0.0:
        raise InvalidDeformationError(f"Volume ratio must be positive, got {j}")
    return kinematics_from(np.diag([j, 1.0, 1.0]))


def mode_isochoric_uniaxial(lam: float, lam_dot: float = 0.0) -> DeformationState:
    """Volume-preserving uniaxial stretch along e1.

    F = diag(λ, λ^(-1/2), λ^(-1/2)) and Ḟ = λ̇ diag(1, -λ^(-3/2)/2, -λ^(-3/2)/2).
    A rate of exactly zero gives a quasi-static state.

    Raises:
        InvalidDeformationError: If the stretch is not positive.
    """
    if lam <= 0.0:
        raise InvalidDeformationError(f"Stretch must be positive, got {lam}")
    lateral = lam ** -0.5
    F = np.diag([lam, lateral, lateral])
    lateral_rate = -0.5 * lam ** -1.5
    Fdot = lam_dot * np.diag([1.0, lateral_rate, lateral_rate])
    return kinematics_from(F, Fdot)


def mode_simple_shear(gamma: float, gamma_dot: float = 0.0) -> DeformationState:
    """Simple shear F = I + γ e1⊗E2 with Ḟ = γ̇ e1⊗E2."""
    F = np.eye(3)
    F[0, 1] = gamma
    Fdot = np.zeros((3, 3))
    Fdot[0, 1] = gamma_dot
    return kinematics_from(F, Fdot)


def mode_state(mode: DeformationMode, strain: float, rate: float = 0.0) -> DeformationState:
    """Dispatch to the generator for ``mode``.

    The confined mode is rate-free; a nonzero rate there is rejected.
    """
    mode = DeformationMode(mode)
    if mode is DeformationMode.CONFINED:
        if rate != 0.0:
            raise InvalidDeformationError("The confined mode does not take a rate")
        return mode_confined_uniaxial(strain)
    if mode is DeformationMode.UNIAXIAL:
        return mode_isochoric_uniaxial(strain, rate)
    return mode_simple_shear(strain, rate)
