"""Closed-form volumetric, hyperelastic and viscous models.

Every model here is linear in its ``linear_parameters`` once the optional
``shape_parameter`` (an exponent or limiting stretch) is fixed. Subclasses
therefore only describe the per-parameter energy terms and coefficient rows;
energy, coefficients and stress follow from those. The same decomposition
drives least-squares calibration.
"""

import logging
from typing import Any, ClassVar, Dict, Literal, Optional, Tuple, Type

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator

from viscogp.analytic.coefficients import (
    COEFFICIENT_NAMES,
    Branch,
    CoefficientVector,
    contract,
)
from viscogp.continuum.kinematics import (
    DeformationState,
    InvariantSet,
    integrity_basis,
    invariants,
)
from viscogp.continuum.tensors import SymTensor3
from viscogp.core.errors import DomainError

logger = logging.getLogger(__name__)

# Round-off allowed below a square-root or power argument before it is a domain error.
ROUNDOFF_TOLERANCE = 1e-12


def _excess(value: float, name: str) -> float:
    """value - 3, clamped to zero within round-off."""
    x = value - 3.0
    if x < 0.0:
        if x < -ROUNDOFF_TOLERANCE:
            raise DomainError(f"{name} = {value:.15g} is below 3")
        return 0.0
    return x


class ConstitutiveModel(BaseModel):
    """Base class for the analytic models."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    branch: ClassVar[Branch]
    linear_parameters: ClassVar[Tuple[str, ...]]
    shape_parameter: ClassVar[Optional[str]] = None
    shape_grid: ClassVar[Tuple[float, ...]] = ()

    family: str

    @classmethod
    def energy_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        """Energy contribution of each linear parameter at unit value."""
        raise NotImplementedError

    @classmethod
    def coefficient_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        """Coefficient rows (one per linear parameter) at unit parameter value."""
        raise NotImplementedError

    @property
    def linear_values(self) -> NDArray[np.float64]:
        return np.array([getattr(self, name) for name in self.linear_parameters], dtype=float)

    @property
    def shape_value(self) -> Optional[float]:
        if self.shape_parameter is None:
            return None
        return float(getattr(self, self.shape_parameter))

    def energy(self, state: DeformationState) -> float:
        """Energy density (or dissipation potential) at a state.

        Raises:
            DomainError: If the state is outside the model's domain.
        """
        terms = self.energy_terms(invariants(state), self.shape_value)
        return float(self.linear_values @ terms)

    def coefficients(self, inv: InvariantSet) -> CoefficientVector:
        """Integrity-basis coefficients for the given invariants."""
        rows = self.coefficient_terms(inv, self.shape_value)
        return CoefficientVector(self.branch, self.linear_values @ rows)

    def stress(self, state: DeformationState) -> SymTensor3:
        """Second Piola-Kirchhoff stress of this branch."""
        coefficients = self.coefficients(invariants(state))
        return contract(coefficients, integrity_basis(state), state.J)

    @property
    def params(self) -> Dict[str, float]:
        return self.model_dump(exclude={"family"})

    def to_document(self) -> Dict[str, Any]:
        """JSON document ``{family, params}``."""
        return {"family": self.family, "params": self.params}


def _rows(branch: Branch, *rows: Dict[int, float]) -> NDArray[np.float64]:
    """Build coefficient rows from sparse {coefficient index: value} maps."""
    out = np.zeros((len(rows), len(COEFFICIENT_NAMES[branch])))
    for i, row in enumerate(rows):
        for k, value in row.items():
            out[i, k] = value
    return out


# ---------------------------------------------------------------------------
# Volumetric models: U(J), ζ₁ = J dU/dJ
# ---------------------------------------------------------------------------


class VolumetricModel(ConstitutiveModel):
    branch: ClassVar[Branch] = Branch.VOL


class SimoMiehe(VolumetricModel):
    """U = κ/2 ((J² - 1)/2 - ln J)."""

    linear_parameters: ClassVar[Tuple[str, ...]] = ("kappa",)

    family: Literal["simo_miehe"] = "simo_miehe"
    kappa: float = Field(gt=0)

    @classmethod
    def energy_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        J = inv.J
        return np.array([0.5 * (0.5 * (J * J - 1.0) - np.log(J))])

    @classmethod
    def coefficient_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        return np.array([[0.5 * (inv.J * inv.J - 1.0)]])


class VolNeoHookean(VolumetricModel):
    """U = κ/2 (J - 1)²."""

    linear_parameters: ClassVar[Tuple[str, ...]] = ("kappa",)

    family: Literal["vol_neo_hookean"] = "vol_neo_hookean"
    kappa: float = Field(gt=0)

    @classmethod
    def energy_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        return np.array([0.5 * (inv.J - 1.0) ** 2])

    @classmethod
    def coefficient_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        return np.array([[inv.J * (inv.J - 1.0)]])


class VolOgden(VolumetricModel):
    """U = κ/β² (J^(-β) - 1 + β ln J)."""

    linear_parameters: ClassVar[Tuple[str, ...]] = ("kappa",)
    shape_parameter: ClassVar[Optional[str]] = "beta"
    shape_grid: ClassVar[Tuple[float, ...]] = tuple(
        float(b) for b in np.round(np.linspace(-8.0, 8.0, 161), 10) if b != 0.0
    )

    family: Literal["vol_ogden"] = "vol_ogden"
    kappa: float = Field(gt=0)
    beta: float

    @field_validator("beta")
    @classmethod
    def _nonzero_beta(cls, value: float) -> float:
        if value == 0.0:
            raise ValueError("beta must be nonzero")
        return value

    @classmethod
    def energy_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        beta = float(shape)  # type: ignore[arg-type]
        J = inv.J
        return np.array([(J ** -beta - 1.0 + beta * np.log(J)) / beta**2])

    @classmethod
    def coefficient_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        beta = float(shape)  # type: ignore[arg-type]
        return np.array([[(1.0 - inv.J ** -beta) / beta]])


# ---------------------------------------------------------------------------
# Hyperelastic models: W̄ₕ(Ī₁, Ī₂), Γ₁ = 2(W₁ + Ī₁W₂), Γ₂ = -2W₂
# ---------------------------------------------------------------------------


class HyperelasticModel(ConstitutiveModel):
    branch: ClassVar[Branch] = Branch.H_ISO


class NeoHookean(HyperelasticModel):
    """W = A10 (Ī₁ - 3)."""

    linear_parameters: ClassVar[Tuple[str, ...]] = ("A10",)

    family: Literal["neo_hookean"] = "neo_hookean"
    A10: float

    @classmethod
    def energy_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        return np.array([inv.I1bar - 3.0])

    @classmethod
    def coefficient_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        return np.array([[2.0, 0.0]])


class MooneyRivlin(HyperelasticModel):
    """W = A10 (Ī₁ - 3) + A01 (Ī₂ - 3)."""

    linear_parameters: ClassVar[Tuple[str, ...]] = ("A10", "A01")

    family: Literal["mooney_rivlin"] = "mooney_rivlin"
    A10: float
    A01: float

    @classmethod
    def energy_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        return np.array([inv.I1bar - 3.0, inv.I2bar - 3.0])

    @classmethod
    def coefficient_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        return np.array([[2.0, 0.0], [2.0 * inv.I1bar, -2.0]])


class GeneralizedRivlin(HyperelasticModel):
    """Mooney-Rivlin plus the mixed term A11 (Ī₁ - 3)(Ī₂ - 3)."""

    linear_parameters: ClassVar[Tuple[str, ...]] = ("A10", "A01", "A11")

    family: Literal["generalized_rivlin"] = "generalized_rivlin"
    A10: float
    A01: float
    A11: float

    @classmethod
    def energy_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        x1, x2 = inv.I1bar - 3.0, inv.I2bar - 3.0
        return np.array([x1, x2, x1 * x2])

    @classmethod
    def coefficient_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        I1, I2 = inv.I1bar, inv.I2bar
        return np.array([
            [2.0, 0.0],
            [2.0 * I1, -2.0],
            [2.0 * (I1 * I1 - 3.0 * I1 + I2 - 3.0), -2.0 * (I1 - 3.0)],
        ])


class Yeoh(HyperelasticModel):
    """W = C1 (Ī₁ - 3) + C2 (Ī₁ - 3)²."""

    linear_parameters: ClassVar[Tuple[str, ...]] = ("C1", "C2")

    family: Literal["yeoh"] = "yeoh"
    C1: float
    C2: float

    @classmethod
    def energy_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        x1 = inv.I1bar - 3.0
        return np.array([x1, x1 * x1])

    @classmethod
    def coefficient_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        return np.array([[2.0, 0.0], [4.0 * (inv.I1bar - 3.0), 0.0]])


def _gent_ratio(I1bar: float, Jm: float) -> float:
    """1 - (Ī₁ - 3)/J_m, required positive."""
    ratio = 1.0 - (I1bar - 3.0) / Jm
    if ratio <= 0.0:
        raise DomainError(f"Gent limit exceeded: Ī₁ - 3 = {I1bar - 3.0:.6g} >= J_m = {Jm:.6g}")
    return ratio


class Gent(HyperelasticModel):
    """W = -μ J_m / 2 ln(1 - (Ī₁ - 3)/J_m)."""

    linear_parameters: ClassVar[Tuple[str, ...]] = ("mu",)
    shape_parameter: ClassVar[Optional[str]] = "Jm"
    shape_grid: ClassVar[Tuple[float, ...]] = tuple(float(v) for v in np.geomspace(1e-2, 1e4, 121))

    family: Literal["gent"] = "gent"
    mu: float = Field(gt=0)
    Jm: float = Field(gt=0)

    @classmethod
    def energy_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        Jm = float(shape)  # type: ignore[arg-type]
        return np.array([-0.5 * Jm * np.log(_gent_ratio(inv.I1bar, Jm))])

    @classmethod
    def coefficient_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        Jm = float(shape)  # type: ignore[arg-type]
        return np.array([[1.0 / _gent_ratio(inv.I1bar, Jm), 0.0]])


class GentGent(HyperelasticModel):
    """Gent plus 3 C2 / 2 ln(Ī₂ / 3)."""

    linear_parameters: ClassVar[Tuple[str, ...]] = ("mu", "C2")
    shape_parameter: ClassVar[Optional[str]] = "Jm"
    shape_grid: ClassVar[Tuple[float, ...]] = Gent.shape_grid

    family: Literal["gent_gent"] = "gent_gent"
    mu: float = Field(gt=0)
    C2: float
    Jm: float = Field(gt=0)

    @classmethod
    def energy_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        Jm = float(shape)  # type: ignore[arg-type]
        return np.array([
            -0.5 * Jm * np.log(_gent_ratio(inv.I1bar, Jm)),
            1.5 * np.log(inv.I2bar / 3.0),
        ])

    @classmethod
    def coefficient_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        Jm = float(shape)  # type: ignore[arg-type]
        I1, I2 = inv.I1bar, inv.I2bar
        return np.array([
            [1.0 / _gent_ratio(I1, Jm), 0.0],
            [3.0 * I1 / I2, -3.0 / I2],
        ])


# ---------------------------------------------------------------------------
# Viscous potentials: W̄ᵥ(Ī₁, Ī₂, J̄₁ … J̄₇)
#   Φ₁ = 2(W,J1 - Ī₂ W,J6)  Φ₂ = 2(W,J4 + Ī₁ W,J6)  Φ₃ = 2 W,J6  Φ₄ = 4 W,J2
#   Φ₅ = 2 J̄₃ W,J3          Φ₆ = 2 W,J5               Φ₇ = 2 W,J7
# ---------------------------------------------------------------------------


class ViscousModel(ConstitutiveModel):
    branch: ClassVar[Branch] = Branch.V_ISO


class Pioletti(ViscousModel):
    """W = η′/4 (Ī₁ - 3) J̄₂."""

    linear_parameters: ClassVar[Tuple[str, ...]] = ("eta_prime",)

    family: Literal["pioletti"] = "pioletti"
    eta_prime: float

    @classmethod
    def energy_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        return np.array([0.25 * (inv.I1bar - 3.0) * inv.J2bar])

    @classmethod
    def coefficient_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        return _rows(Branch.V_ISO, {3: inv.I1bar - 3.0})


class GeneralizedPioletti(ViscousModel):
    """W = η (Ī₁ - 3)^β J̄₂, so Φ₄ = 4η (Ī₁ - 3)^β."""

    linear_parameters: ClassVar[Tuple[str, ...]] = ("eta",)
    shape_parameter: ClassVar[Optional[str]] = "beta"
    shape_grid: ClassVar[Tuple[float, ...]] = tuple(
        float(b) for b in np.round(np.linspace(0.1, 4.0, 40), 10)
    )

    family: Literal["generalized_pioletti"] = "generalized_pioletti"
    eta: float
    beta: float = Field(gt=0)

    @classmethod
    def energy_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        x1 = _excess(inv.I1bar, "Ī₁")
        return np.array([x1 ** float(shape) * inv.J2bar])  # type: ignore[arg-type]

    @classmethod
    def coefficient_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        x1 = _excess(inv.I1bar, "Ī₁")
        return _rows(Branch.V_ISO, {3: 4.0 * x1 ** float(shape)})  # type: ignore[arg-type]


class USS(ViscousModel):
    """W = k11 J̄₂ √(Ī₁ - 3) + k21/c21 J̄₅^c21 √(Ī₂ - 3)."""

    linear_parameters: ClassVar[Tuple[str, ...]] = ("k11", "k21")
    shape_parameter: ClassVar[Optional[str]] = "c21"
    shape_grid: ClassVar[Tuple[float, ...]] = tuple(
        float(c) for c in np.round(np.linspace(0.05, 1.0, 20), 10)
    )

    family: Literal["uss"] = "uss"
    k11: float
    k21: float
    c21: float = Field(gt=0, le=1)

    @classmethod
    def energy_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        c21 = float(shape)  # type: ignore[arg-type]
        root1 = np.sqrt(_excess(inv.I1bar, "Ī₁"))
        root2 = np.sqrt(_excess(inv.I2bar, "Ī₂"))
        J5 = max(inv.J5bar, 0.0)
        return np.array([inv.J2bar * root1, J5**c21 / c21 * root2])

    @classmethod
    def coefficient_terms(cls, inv: InvariantSet, shape: Optional[float]) -> NDArray[np.float64]:
        c21 = float(shape)  # type: ignore[arg-type]
        root1 = np.sqrt(_excess(inv.I1bar, "Ī₁"))
        root2 = np.sqrt(_excess(inv.I2bar, "Ī₂"))
        # J̄₅ = 0 only when C̄̇ = 0, where G₇ vanishes as well.
        phi6 = 2.0 * inv.J5bar ** (c21 - 1.0) * root2 if inv.J5bar > 0.0 and root2 > 0.0 else 0.0
        return _rows(Branch.V_ISO, {3: 4.0 * root1}, {5: phi6})


FAMILIES: Dict[str, Type[ConstitutiveModel]] = {
    cls.model_fields["family"].default: cls
    for cls in (
        SimoMiehe, VolNeoHookean, VolOgden,
        NeoHookean, MooneyRivlin, GeneralizedRivlin, Yeoh, Gent, GentGent,
        Pioletti, GeneralizedPioletti, USS,
    )
}


def resolve_family(family: Any) -> Type[ConstitutiveModel]:
    """Look up a model class by family name, or pass a class through."""
    if isinstance(family, type) and issubclass(family, ConstitutiveModel):
        return family
    try:
        return FAMILIES[str(family)]
    except KeyError:
        raise ValueError(
            f"Unknown model family '{family}'. Known: {', '.join(sorted(FAMILIES))}"
        ) from None


def model_from_document(document: Dict[str, Any]) -> ConstitutiveModel:
    """Rebuild a model from its ``{family, params}`` document."""
    cls = resolve_family(document["family"])
    return cls(**document.get("params", {}))
