"""viscogp configuration management."""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
import yaml
from pydantic import BaseModel, Field, field_validator, model_validator

from viscogp.continuum.modes import DeformationMode

ExperimentId = Literal["hydrostatic", "quasistatic", "dynamic"]
Region = Literal["training", "same_mode", "cross_mode"]

EXPERIMENT_IDS: Tuple[str, ...] = ("hydrostatic", "quasistatic", "dynamic")

# Numbered names of the reference experiments.
EXPERIMENT_ALIASES: Dict[str, str] = {
    "5.1": "hydrostatic",
    "5.2": "quasistatic",
    "5.3": "dynamic",
}

# Length-scale box for presets that extrapolate far past their training range.
WIDE_LOG_LENGTH_SCALE_BOUNDS: Tuple[float, float] = (-3.0, 5.0)


def resolve_experiment_id(name: str) -> str:
    """Canonical experiment id for an id or its numbered alias.

    Raises:
        ValueError: If the name is neither.
    """
    name = EXPERIMENT_ALIASES.get(name, name)
    if name not in EXPERIMENT_IDS:
        known = ", ".join(EXPERIMENT_IDS + tuple(EXPERIMENT_ALIASES))
        raise ValueError(f"Unknown experiment '{name}'. Known: {known}")
    return name


class GprSettings(BaseModel):
    """Gaussian process training defaults.

    Bounds are on (log σ_f, log l) in standardized units.
    """

    alpha: float = Field(default=1e-4, ge=0)
    log_sigma_f_bounds: Tuple[float, float] = (-3.0, 3.0)
    log_length_scale_bounds: Tuple[float, float] = (-3.0, 3.0)
    n_restarts: int = Field(default=8, ge=1)
    method: Literal["Nelder-Mead", "L-BFGS-B"] = "Nelder-Mead"
    max_iter: int = Field(default=400, ge=1)
    penalty_weights: Tuple[float, ...] = (1e2, 1e4, 1e6)
    feasibility_tol: float = 1e-8
    jitter_escalations: int = Field(default=3, ge=0)

    @field_validator("log_sigma_f_bounds", "log_length_scale_bounds")
    @classmethod
    def _ordered(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if value[0] >= value[1]:
            raise ValueError(f"Lower bound must be below upper bound, got {value}")
        return value

    @property
    def bounds(self) -> List[Tuple[float, float]]:
        return [self.log_sigma_f_bounds, self.log_length_scale_bounds]


class GridRange(BaseModel):
    """Uniform grid of ``count`` points on [start, stop]."""

    start: float
    stop: float
    count: int = Field(default=51, ge=2)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


class ModeGrid(BaseModel):
    """A deformation mode swept over a strain grid at one or more rates."""

    mode: DeformationMode
    strain: GridRange
    rates: List[float] = Field(default_factory=lambda: [0.0])
    region: Region = "same_mode"

    @model_validator(mode="after")
    def _check_rates(self) -> "ModeGrid":
        if not self.rates:
            raise ValueError("A grid needs at least one rate (use 0 for quasi-static)")
        if self.mode is DeformationMode.CONFINED and any(r != 0.0 for r in self.rates):
            raise ValueError("The confined mode is rate-free")
        return self

    @property
    def size(self) -> int:
        return self.strain.count * len(self.rates)


class ModelDocument(BaseModel):
    """Analytic model reference, ``{family, params}``."""

    family: str
    params: Dict[str, float] = Field(default_factory=dict)

    def build(self) -> Any:
        from viscogp.analytic.models import model_from_document

        return model_from_document(self.model_dump())


class ExperimentSpec(BaseModel):
    """One reproduction experiment: ground truth, grids, baselines and run settings."""

    version: str = "1.0"
    experiment_id: ExperimentId
    ground_truth: ModelDocument
    training: List[ModeGrid]
    testing: List[ModeGrid] = Field(default_factory=list)
    baseline_family: Optional[str] = None
    classical: bool = True
    calibration_components: Literal["all", "loading"] = "all"
    constraint_grids: Optional[List[ModeGrid]] = None
    gpr: GprSettings = Field(default_factory=GprSettings)
    seed: int = 0
    output_dir: str = "results"

    @field_validator("training")
    @classmethod
    def _training_not_empty(cls, value: List[ModeGrid]) -> List[ModeGrid]:
        if not value:
            raise ValueError("At least one training grid is required")
        return value

    @property
    def rate_dependent(self) -> bool:
        return any(r != 0.0 for grid in self.training for r in grid.rates)

    @classmethod
    def load(cls, config_path: Path) -> "ExperimentSpec":
        """Load a spec from JSON (``.json``) or YAML (anything else)."""
        config_path = Path(config_path)
        if not config_path.exists():
            raise FileNotFoundError(f"Config file not found: {config_path}")

        with open(config_path) as f:
            if config_path.suffix.lower() == ".json":
                data = json.load(f)
            else:
                data = yaml.safe_load(f)

        return cls(**data)

    def save(self, config_path: Path) -> None:
        """Save the experiment as JSON (``.json``) or YAML (anything else)."""
        config_path = Path(config_path)
        config_path.parent.mkdir(parents=True, exist_ok=True)

        data = self.model_dump(mode="json")
        with open(config_path, "w") as f:
            if config_path.suffix.lower() == ".json":
                json.dump(data, f, indent=2)
            else:
                yaml.dump(data, f, default_flow_style=False, sort_keys=False)

    @classmethod
    def preset(cls, experiment_id: str) -> "ExperimentSpec":
        """The default configuration of a reproduction experiment, by id or alias."""
        return _PRESETS[resolve_experiment_id(experiment_id)]()


TRAINING_RATES = [10.0, 32.5, 55.0, 77.5, 100.0]
TESTING_RATES = [10.0, 32.5, 55.0, 77.5, 100.0, 122.5, 145.0]


def _hydrostatic() -> ExperimentSpec:
    return ExperimentSpec(
        experiment_id="hydrostatic",
        ground_truth=ModelDocument(family="simo_miehe", params={"kappa": 10.0}),
        training=[
            ModeGrid(
                mode="confined",
                strain=GridRange(start=0.75, stop=1.0, count=26),
                region="training",
            ),
        ],
        testing=[
            ModeGrid(mode="confined", strain=GridRange(start=0.5, stop=1.0), region="same_mode"),
            ModeGrid(mode="confined", strain=GridRange(start=1.0, stop=1.5), region="cross_mode"),
        ],
        baseline_family="vol_neo_hookean",
        calibration_components="loading",
        gpr=GprSettings(log_length_scale_bounds=WIDE_LOG_LENGTH_SCALE_BOUNDS),
        output_dir="results/hydrostatic",
    )


def _quasistatic() -> ExperimentSpec:
    return ExperimentSpec(
        experiment_id="quasistatic",
        ground_truth=ModelDocument(family="mooney_rivlin", params={"A10": 1.0, "A01": 0.5}),
        training=[
            ModeGrid(
                mode="uniaxial",
                strain=GridRange(start=1.0, stop=1.25, count=26),
                region="training",
            ),
        ],
        testing=[
            ModeGrid(mode="uniaxial", strain=GridRange(start=1.0, stop=1.5), region="same_mode"),
            ModeGrid(mode="uniaxial", strain=GridRange(start=0.5, stop=1.0), region="cross_mode"),
            ModeGrid(mode="shear", strain=GridRange(start=0.0, stop=0.5), region="cross_mode"),
        ],
        baseline_family="yeoh",
        calibration_components="loading",
        output_dir="results/quasistatic",
    )


def _dynamic() -> ExperimentSpec:
    return ExperimentSpec(
        experiment_id="dynamic",
        ground_truth=ModelDocument(family="uss", params={"k11": 1.0, "k21": 1.0, "c21": 0.75}),
        training=[
            ModeGrid(
                mode="uniaxial",
                strain=GridRange(start=1.0, stop=1.5, count=31),
                rates=list(TRAINING_RATES),
                region="training",
            ),
        ],
        testing=[
            ModeGrid(
                mode="uniaxial",
                strain=GridRange(start=1.0, stop=1.75),
                rates=list(TESTING_RATES),
                region="same_mode",
            ),
            ModeGrid(
                mode="uniaxial",
                strain=GridRange(start=0.5, stop=1.0),
                rates=[-r for r in TESTING_RATES],
                region="cross_mode",
            ),
            ModeGrid(
                mode="shear",
                strain=GridRange(start=0.0, stop=0.5),
                rates=list(TESTING_RATES),
                region="cross_mode",
            ),
        ],
        baseline_family="pioletti",
        calibration_components="loading",
        gpr=GprSettings(log_length_scale_bounds=WIDE_LOG_LENGTH_SCALE_BOUNDS),
        output_dir="results/dynamic",
    )


_PRESETS = {
    "hydrostatic": _hydrostatic,
    "quasistatic": _quasistatic,
    "dynamic": _dynamic,
}
