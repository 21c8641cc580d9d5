"""Recover branch coefficients from a stress by solving the Voigt system A x = S."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from viscogp.analytic.coefficients import Branch, CoefficientVector, design_matrix
from viscogp.continuum.kinematics import DeformationState, IntegrityBasis, integrity_basis
from viscogp.continuum.tensors import SymTensor3
from viscogp.core.errors import ExtractionError

RANK_CUTOFF = 1e-10

# Position of the G₆ column among the viscous coefficients Φ₁ … Φ₇.
G6_COLUMN = 4

# Row weights making the Euclidean norm of a weighted Voigt vector its Frobenius norm.
_ROW_WEIGHTS = np.array([1.0, 1.0, 1.0, np.sqrt(2.0), np.sqrt(2.0), np.sqrt(2.0)])


@dataclass(frozen=True)
class Extraction:
    """Extracted coefficients and the relative reconstruction residual."""

    coefficients: CoefficientVector
    residual: float


def extract_coefficients(
    branch: Branch,
    state: DeformationState,
    stress: SymTensor3,
    basis: Optional[IntegrityBasis] = None,
) -> Extraction:
    """Solve a branch's Voigt system for its coefficients.

    The minimum-norm least-squares solution is taken, with singular values below
    1e-10 σ_max treated as zero. When G₆ is degenerate its column is dropped and
    its coefficient set to 0.

    Raises:
        ExtractionError: If the design matrix vanishes but the stress does not.
    """
    branch = Branch(branch)
    basis = basis or integrity_basis(state)
    A = _ROW_WEIGHTS[:, None] * design_matrix(branch, basis, state.J)
    b = _ROW_WEIGHTS * stress.voigt

    active = np.ones(A.shape[1], dtype=bool)
    if branch is Branch.V_ISO and basis.g6_degenerate:
        active[G6_COLUMN] = False

    b_norm = float(np.linalg.norm(b))
    values = np.zeros(A.shape[1])
    if not np.any(A[:, active]):
        if b_norm > 0.0:
            raise ExtractionError(
                f"The {branch.value} basis vanishes at this state but the stress does not "
                f"(|S| = {b_norm:.3e})"
            )
        return Extraction(CoefficientVector(branch, values), 0.0)

    values[active] = np.linalg.pinv(A[:, active], rcond=RANK_CUTOFF) @ b
    residual = float(np.linalg.norm(A @ values - b)) / b_norm if b_norm > 0.0 else 0.0
    return Extraction(CoefficientVector(branch, values), residual)
