"""Finite-strain kinematics with a dilatational/isochoric split.

Given the deformation gradient F and its rate, this module derives

- the right Cauchy-Green tensor C = FᵀF and its rate Ċ = ḞᵀF + FᵀḞ
- the volume ratio J = det F and its rate J̇ = (J/2) tr(C⁻¹Ċ)
- the unimodular part C̄ = J^(-2/3) C and its rate
  C̄̇ = J^(-2/3) Ċ - (2/3) J^(-5/3) J̇ C
- the strain invariants Ī₁, Ī₂ and the seven rate invariants J̄₁ … J̄₇
- the referential deviator Dev(Z) = Z - (1/3)(Z : C) C⁻¹
- the eight-tensor integrity basis G₁ … G₈ spanning isotropic stress responses
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from viscogp.continuum.tensors import SymTensor3, Tensor3, as_tensor3
from viscogp.core.errors import InvalidDeformationError

# Relative singular-value cutoff below which C̄̇ counts as singular.
SINGULARITY_CUTOFF = 1e-10

_IDENTITY = np.eye(3)


@dataclass(frozen=True, eq=False)
class DeformationState:
    """Kinematics of one material point at one instant."""

    F: Tensor3
    Fdot: Tensor3
    C: SymTensor3
    Cdot: SymTensor3
    J: float
    Jdot: float
    Cbar: SymTensor3
    Cbardot: SymTensor3

    @property
    def is_quasi_static(self) -> bool:
        """True when the state carries no deformation rate."""
        return not np.any(self.Fdot)

    def rotated(self, Q: ArrayLike) -> "DeformationState":
        """Superpose a rigid rotation Q on the current configuration."""
        Q = as_tensor3(Q, "rotation")
        return kinematics_from(Q @ self.F, Q @ self.Fdot)


@dataclass(frozen=True)
class InvariantSet:
    """Strain and strain-rate invariants of the isochoric kinematics."""

    J: float
    I1bar: float
    I2bar: float
    J1bar: float
    J2bar: float
    J3bar: float
    J4bar: float
    J5bar: float
    J6bar: float
    J7bar: float

    def as_array(self) -> NDArray[np.float64]:
        return np.array([
            self.J, self.I1bar, self.I2bar,
            self.J1bar, self.J2bar, self.J3bar, self.J4bar,
            self.J5bar, self.J6bar, self.J7bar,
        ])


@dataclass(frozen=True, eq=False)
class IntegrityBasis:
    """The tensors G₁ … G₈.

    ``g6_degenerate`` is set when C̄̇ is singular; G₆ is then built from the
    Moore-Penrose pseudo-inverse of C̄̇.
    """

    tensors: Tuple[SymTensor3, ...]
    g6_degenerate: bool

    def __post_init__(self) -> None:
        if len(self.tensors) != 8:
            raise ValueError(f"An integrity basis has 8 tensors, got {len(self.tensors)}")

    def __getitem__(self, k: int) -> SymTensor3:
        """Return G_k using the 1-based numbering of the basis."""
        if not 1 <= k <= 8:
            raise IndexError(f"Basis index must be in 1..8, got {k}")
        return self.tensors[k - 1]


def kinematics_from(F: ArrayLike, Fdot: Optional[ArrayLike] = None) -> DeformationState:
    """Derive the full kinematic state from F and Ḟ.

    Args:
        F: Deformation gradient, 3x3 with positive determinant.
        Fdot: Rate of the deformation gradient. ``None`` means quasi-static.

    Returns:
        The populated DeformationState.

    Raises:
        InvalidDeformationError: If det F is not strictly positive.
    """
    F = as_tensor3(F, "F")
    Fdot = np.zeros((3, 3)) if Fdot is None else as_tensor3(Fdot, "Fdot")

    J = float(np.linalg.det(F))
    if not np.isfinite(J) or J <= 0.0:
        raise InvalidDeformationError(f"Deformation gradient must have det F > 0, got {J:.6g}")

    C = F.T @ F
    Cdot = Fdot.T @ F + F.T @ Fdot
    Jdot = 0.5 * J * float(np.trace(np.linalg.solve(C, Cdot)))

    Cbar = J ** (-2.0 / 3.0) * C
    Cbardot = J ** (-2.0 / 3.0) * Cdot - (2.0 / 3.0) * J ** (-5.0 / 3.0) * Jdot * C

    return DeformationState(
        F=F,
        Fdot=Fdot,
        C=SymTensor3.from_matrix(C),
        Cdot=SymTensor3.from_matrix(Cdot),
        J=J,
        Jdot=Jdot,
        Cbar=SymTensor3.from_matrix(Cbar),
        Cbardot=SymTensor3.from_matrix(Cbardot),
    )


def kinematics_from_right_cauchy_green(
    C: ArrayLike, Cdot: Optional[ArrayLike] = None
) -> DeformationState:
    """Build a state from C and Ċ using the symmetric right stretch.

    F is taken as U = C^(1/2); Ḟ is the symmetric solution of UḞ + ḞU = Ċ, so the
    state reproduces the given C and Ċ.
    """
    C = as_tensor3(C.matrix if isinstance(C, SymTensor3) else C, "C")
    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (C + C.T))
    if eigenvalues.min() <= 0.0:
        raise InvalidDeformationError("C must be symmetric positive-definite")
    U = eigenvectors @ np.diag(np.sqrt(eigenvalues)) @ eigenvectors.T

    if Cdot is None:
        return kinematics_from(U)
    Cdot = as_tensor3(Cdot.matrix if isinstance(Cdot, SymTensor3) else Cdot, "Cdot")
    Udot = linalg.solve_sylvester(U, U, 0.5 * (Cdot + Cdot.T))
    return kinematics_from(U, 0.5 * (Udot + Udot.T))


def invariants(state: DeformationState) -> InvariantSet:
    """Compute J, Ī₁, Ī₂ and J̄₁ … J̄₇ from C̄ and C̄̇."""
    Cb = state.Cbar.matrix
    D = state.Cbardot.matrix
    Cb2 = Cb @ Cb
    D2 = D @ D

    I1 = float(np.trace(Cb))
    return InvariantSet(
        J=state.J,
        I1bar=I1,
        I2bar=0.5 * (I1 * I1 - float(np.trace(Cb2))),
        J1bar=float(np.trace(D)),
        J2bar=float(np.trace(D2)),
        J3bar=float(np.linalg.det(D)),
        J4bar=float(np.trace(Cb @ D)),
        J5bar=float(np.trace(Cb @ D2)),
        J6bar=float(np.trace(Cb2 @ D)),
        J7bar=float(np.trace(Cb2 @ D2)),
    )


def _inverse_spd(C: Tensor3) -> Tensor3:
    try:
        factor = linalg.cho_factor(C, lower=True)
    except linalg.LinAlgError as exc:
        raise InvalidDeformationError("C must be symmetric positive-definite") from exc
    return linalg.cho_solve(factor, _IDENTITY)


def _dev(Z: Tensor3, C: Tensor3, C_inv: Tensor3) -> Tensor3:
    return Z - (np.sum(Z * C) / 3.0) * C_inv


def deviatoric(Z: SymTensor3, C: SymTensor3) -> SymTensor3:
    """Referential deviator Dev(Z) = Z - (1/3)(Z : C) C⁻¹.

    Raises:
        InvalidDeformationError: If C is not positive-definite.
    """
    Cm = C.matrix
    return SymTensor3.from_matrix(_dev(Z.matrix, Cm, _inverse_spd(Cm)))


def integrity_basis(state: DeformationState) -> IntegrityBasis:
    """Evaluate G₁ … G₈ for a state.

    G₁ = C⁻¹, G₂ = Dev(I), G₃ = Dev(C̄), G₄ = Dev(C̄⁻¹), G₅ = Dev(C̄̇),
    G₆ = Dev(C̄̇⁻¹), G₇ = Dev(C̄C̄̇ + C̄̇C̄), G₈ = Dev(C̄²C̄̇ + C̄̇C̄²).
    """
    C = state.C.matrix
    C_inv = _inverse_spd(C)
    Cb = state.Cbar.matrix
    D = state.Cbardot.matrix
    Cb2 = Cb @ Cb

    singular_values = np.linalg.svd(D, compute_uv=False)
    degenerate = bool(
        singular_values[0] == 0.0
        or singular_values[-1] <= SINGULARITY_CUTOFF * singular_values[0]
    )
    D_inv = np.linalg.pinv(D, rcond=SINGULARITY_CUTOFF) if degenerate else np.linalg.inv(D)

    generators = (
        _IDENTITY,
        Cb,
        np.linalg.inv(Cb),
        D,
        D_inv,
        Cb @ D + D @ Cb,
        Cb2 @ D + D @ Cb2,
    )
    tensors = [SymTensor3.from_matrix(C_inv)]
    tensors.extend(SymTensor3.from_matrix(_dev(Z, C, C_inv)) for Z in generators)
    return IntegrityBasis(tensors=tuple(tensors), g6_degenerate=degenerate)
