"""Stress branches, their scalar coefficients, and stress assembly.

Each stress branch is a linear combination of integrity-basis tensors:

    S_vol   = ζ₁ G₁
    S_h,iso = J^(-2/3) (Γ₁ G₂ + Γ₂ G₃)
    S_v,iso = J^(-2/3) (Φ₁ G₂ + … + Φ₇ G₈)
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np
from numpy.typing import NDArray

from viscogp.continuum.kinematics import IntegrityBasis
from viscogp.continuum.tensors import SymTensor3


class Branch(str, Enum):
    """Additive stress branches."""

    VOL = "vol"
    H_ISO = "h_iso"
    V_ISO = "v_iso"


COEFFICIENT_NAMES: Dict[Branch, Tuple[str, ...]] = {
    Branch.VOL: ("zeta1",),
    Branch.H_ISO: ("Gamma1", "Gamma2"),
    Branch.V_ISO: tuple(f"Phi{k}" for k in range(1, 8)),
}

# 1-based integrity-basis indices each branch's coefficients multiply.
BASIS_INDICES: Dict[Branch, Tuple[int, ...]] = {
    Branch.VOL: (1,),
    Branch.H_ISO: (2, 3),
    Branch.V_ISO: (2, 3, 4, 5, 6, 7, 8),
}


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """Coefficients of one branch, in stress units."""

    branch: Branch
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        branch = Branch(self.branch)
        values = np.array(self.values, dtype=float).reshape(-1)
        expected = len(COEFFICIENT_NAMES[branch])
        if values.shape[0] != expected:
            raise ValueError(
                f"Branch '{branch.value}' has {expected} coefficients, got {values.shape[0]}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "branch", branch)
        object.__setattr__(self, "values", values)

    @property
    def names(self) -> Tuple[str, ...]:
        return COEFFICIENT_NAMES[self.branch]

    def to_dict(self) -> Dict[str, float]:
        return {name: float(v) for name, v in zip(self.names, self.values)}

    @classmethod
    def zeros(cls, branch: Branch) -> "CoefficientVector":
        return cls(branch, np.zeros(len(COEFFICIENT_NAMES[Branch(branch)])))


def isochoric_prefactor(branch: Branch, J: float) -> float:
    """J^(-2/3) for the isochoric branches, 1 for the volumetric one."""
    return 1.0 if Branch(branch) is Branch.VOL else J ** (-2.0 / 3.0)


def branch_tensors(branch: Branch, basis: IntegrityBasis) -> List[SymTensor3]:
    """The basis tensors a branch's coefficients multiply, in coefficient order."""
    return [basis[k] for k in BASIS_INDICES[Branch(branch)]]


def contract(coefficients: CoefficientVector, basis: IntegrityBasis, J: float) -> SymTensor3:
    """Assemble a branch stress from its coefficients and the integrity basis."""
    tensors = branch_tensors(coefficients.branch, basis)
    voigt = np.zeros(6)
    for value, tensor in zip(coefficients.values, tensors):
        if value != 0.0:
            voigt += value * tensor.voigt
    return SymTensor3(isochoric_prefactor(coefficients.branch, J) * voigt)


def design_matrix(branch: Branch, basis: IntegrityBasis, J: float) -> NDArray[np.float64]:
    """6 x n matrix whose columns are the prefactored Voigt basis tensors."""
    prefactor = isochoric_prefactor(branch, J)
    return prefactor * np.column_stack([t.voigt for t in branch_tensors(branch, basis)])
