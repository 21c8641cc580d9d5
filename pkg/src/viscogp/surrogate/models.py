"""Invariant-based surrogate models, the black-box baseline, and dissipation."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from viscogp.analytic.coefficients import Branch, CoefficientVector, contract, design_matrix
from viscogp.analytic.models import model_from_document
from viscogp.continuum.kinematics import DeformationState, integrity_basis, invariants
from viscogp.continuum.tensors import SymTensor3
from viscogp.core.config import GprSettings
from viscogp.core.errors import DatasetFormatError
from viscogp.gpr.constraints import ConstraintSet, fit_constrained
from viscogp.gpr.model import GpModel, fit
from viscogp.surrogate.dataset import (
    BranchDataset,
    StarDataset,
    dataset_hash,
    surrogate_inputs,
)

logger = logging.getLogger(__name__)

ENVELOPE_VERSION = 1

# Double-contraction weights on Voigt vectors.
_DDOT_WEIGHTS = np.array([1.0, 1.0, 1.0, 2.0, 2.0, 2.0])


def dissipation(stress_v_iso: SymTensor3, Cdot: SymTensor3) -> float:
    """Internal dissipation S_v,iso : Ċ."""
    return stress_v_iso.ddot(Cdot)


def dissipation_functional(state: DeformationState) -> NDArray[np.float64]:
    """Vector c with S_v,iso : Ċ = c · (Φ₁ … Φ₇) at this state."""
    A = design_matrix(Branch.V_ISO, integrity_basis(state), state.J)
    return A.T @ (_DDOT_WEIGHTS * state.Cdot.voigt)


def dissipation_constraints(states: Sequence[DeformationState]) -> ConstraintSet:
    """Non-negative dissipation constraints at the given states.

    States where the functional vanishes (no deformation rate) carry no
    information and are skipped.

    Raises:
        ValueError: If no state yields a usable constraint.
    """
    points, functionals = [], []
    for state in states:
        c = dissipation_functional(state)
        if np.any(c != 0.0):
            points.append(surrogate_inputs(Branch.V_ISO, invariants(state)))
            functionals.append(c)
    if not points:
        raise ValueError("None of the states produces a dissipation constraint")
    return ConstraintSet(points=np.asarray(points), functionals=np.asarray(functionals))


@dataclass(frozen=True, eq=False)
class SurrogateModel:
    """Gaussian process from branch invariants to branch coefficients."""

    branch: Branch
    gp: GpModel
    constrained: bool = False
    provenance: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "branch", Branch(self.branch))

    def predict_coefficients(self, state: DeformationState) -> CoefficientVector:
        x = surrogate_inputs(self.branch, invariants(state))
        return CoefficientVector(self.branch, self.gp.predict(x)[0])

    def predict_stress(self, state: DeformationState) -> SymTensor3:
        """Predicted coefficients contracted with the state's integrity basis."""
        return contract(self.predict_coefficients(state), integrity_basis(state), state.J)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "surrogate",
            "version": ENVELOPE_VERSION,
            "branch": self.branch.value,
            "constrained": self.constrained,
            "provenance": dict(self.provenance),
            "gp": self.gp.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SurrogateModel":
        return cls(
            branch=Branch(data["branch"]),
            gp=GpModel.from_dict(data["gp"]),
            constrained=bool(data.get("constrained", False)),
            provenance=dict(data.get("provenance", {})),
        )


def train_surrogate(
    branch: Branch,
    star: StarDataset,
    alpha: Optional[float] = None,
    constraints: Optional[ConstraintSet] = None,
    settings: Optional[GprSettings] = None,
    seed: int = 0,
) -> SurrogateModel:
    """Fit the Gaussian process of one branch surrogate.

    The reference row is appended when missing. The viscous branch is trained
    under non-negative dissipation constraints, by default at its own training
    states.

    Raises:
        ValueError: If constraints are given for a rate-free branch.
        FitError: Propagated from the Gaussian process.
    """
    branch = Branch(branch)
    if star.branch is not branch:
        raise ValueError(f"Dataset is for '{star.branch.value}', not '{branch.value}'")
    settings = settings or GprSettings()
    alpha = settings.alpha if alpha is None else alpha
    star = star.with_reference_row()

    if branch is Branch.V_ISO:
        constraints = constraints or dissipation_constraints(star.states)
        gp = fit_constrained(
            star.inputs, star.outputs, constraints, alpha=alpha, settings=settings, seed=seed
        )
    else:
        if constraints is not None:
            raise ValueError(f"Constraints apply to the viscous branch only, not '{branch.value}'")
        gp = fit(star.inputs, star.outputs, alpha=alpha, settings=settings, seed=seed)

    provenance = {
        "dataset_hash": star.source_hash,
        "alpha": alpha,
        "n_train": len(star),
        "n_constraints": len(constraints) if constraints is not None else 0,
        "seed": seed,
    }
    logger.info(f"Trained {branch.value} surrogate on {len(star)} rows")
    return SurrogateModel(
        branch=branch, gp=gp, constrained=constraints is not None, provenance=provenance
    )


def classical_inputs(state: DeformationState, rate_dependent: bool) -> NDArray[np.float64]:
    """vec(C), followed by vec(Ċ) for rate-dependent mappings."""
    if rate_dependent:
        return np.concatenate([state.C.voigt, state.Cdot.voigt])
    return np.array(state.C.voigt)


@dataclass(frozen=True, eq=False)
class ClassicalModel:
    """Black-box Gaussian process from strain (and strain rate) to stress components."""

    gp: GpModel
    rate_dependent: bool = False
    provenance: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        expected = 12 if self.rate_dependent else 6
        if self.gp.n_inputs != expected or self.gp.n_outputs != 6:
            raise DatasetFormatError(
                f"Classical model expects {expected} inputs and 6 outputs, "
                f"got {self.gp.n_inputs} and {self.gp.n_outputs}"
            )

    def predict_stress(self, state: DeformationState) -> SymTensor3:
        return SymTensor3(self.gp.predict(classical_inputs(state, self.rate_dependent))[0])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "classical",
            "version": ENVELOPE_VERSION,
            "rate_dependent": self.rate_dependent,
            "provenance": dict(self.provenance),
            "gp": self.gp.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ClassicalModel":
        return cls(
            gp=GpModel.from_dict(data["gp"]),
            rate_dependent=bool(data["rate_dependent"]),
            provenance=dict(data.get("provenance", {})),
        )


def train_classical(
    data: BranchDataset,
    rate_dependent: Optional[bool] = None,
    alpha: Optional[float] = None,
    settings: Optional[GprSettings] = None,
    seed: int = 0,
) -> ClassicalModel:
    """Fit the black-box mapping vec(C) [⊕ vec(Ċ)] → vec(S).

    ``rate_dependent`` defaults to True for viscous data.
    """
    if len(data) == 0:
        raise ValueError("Cannot train on an empty dataset")
    if rate_dependent is None:
        rate_dependent = data.branch is Branch.V_ISO
    settings = settings or GprSettings()
    alpha = settings.alpha if alpha is None else alpha

    X = np.array([classical_inputs(state, rate_dependent) for state in data.states])
    Y = np.array([stress.voigt for stress in data.stresses])
    gp = fit(X, Y, alpha=alpha, settings=settings, seed=seed)
    provenance = {
        "dataset_hash": dataset_hash(data),
        "alpha": alpha,
        "n_train": len(data),
        "branch": data.branch.value,
        "seed": seed,
    }
    logger.info(f"Trained classical mapping on {len(data)} records ({X.shape[1]} inputs)")
    return ClassicalModel(gp=gp, rate_dependent=rate_dependent, provenance=provenance)


@dataclass(frozen=True, eq=False)
class CompositeSurrogate:
    """Total stress S = S_vol + S_h,iso + S_v,iso from the available branch surrogates."""

    branches: Dict[Branch, SurrogateModel]

    def __post_init__(self) -> None:
        if not self.branches:
            raise ValueError("A composite needs at least one branch surrogate")
        for key, model in self.branches.items():
            if Branch(key) is not model.branch:
                raise ValueError(f"Surrogate for '{model.branch.value}' filed under '{key}'")

    def predict_stress(self, state: DeformationState) -> SymTensor3:
        total = SymTensor3.zeros()
        for model in self.branches.values():
            total = total + model.predict_stress(state)
        return total

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "composite",
            "version": ENVELOPE_VERSION,
            "branches": {Branch(k).value: m.to_dict() for k, m in self.branches.items()},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CompositeSurrogate":
        return cls(
            branches={
                Branch(k): SurrogateModel.from_dict(v) for k, v in data["branches"].items()
            }
        )


def predict_stress(model: Any, state: DeformationState) -> SymTensor3:
    """Stress of any trained or analytic model at a state."""
    if hasattr(model, "predict_stress"):
        return model.predict_stress(state)  # type: ignore[no-any-return]
    return model.stress(state)  # type: ignore[no-any-return]


def model_from_envelope(data: Dict[str, Any]) -> Any:
    """Rebuild a model from its JSON document, dispatching on ``kind``.

    Documents without ``kind`` are analytic ``{family, params}`` documents.

    Raises:
        DatasetFormatError: For unknown kinds or unsupported versions.
    """
    kind = data.get("kind")
    if kind is None and "family" in data:
        return model_from_document(data)
    if data.get("version") != ENVELOPE_VERSION:
        raise DatasetFormatError(f"Unsupported model file version: {data.get('version')}")
    loaders: Dict[str, Any] = {
        "surrogate": SurrogateModel.from_dict,
        "classical": ClassicalModel.from_dict,
        "composite": CompositeSurrogate.from_dict,
    }
    if kind not in loaders:
        raise DatasetFormatError(f"Unknown model kind: {kind!r}")
    return loaders[kind](data)
