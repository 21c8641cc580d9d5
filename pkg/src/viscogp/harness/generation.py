"""Sample analytic ground-truth models over deformation-mode grids."""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from viscogp.analytic.models import ConstitutiveModel
from viscogp.continuum.kinematics import DeformationState
from viscogp.continuum.modes import DeformationMode, mode_state
from viscogp.continuum.tensors import SymTensor3
from viscogp.core.config import ExperimentSpec, ModeGrid
from viscogp.core.errors import DomainError, GenerationError, InvalidDeformationError
from viscogp.surrogate.dataset import BranchDataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridPoint:
    """One (mode, strain, rate) coordinate of a grid.

    Records read from a file carry no mode and NaN coordinates.
    """

    mode: Optional[DeformationMode]
    strain: float
    rate: float
    region: str
    grid: int = 0

    def describe(self) -> str:
        label = self.mode.value if self.mode is not None else "record"
        return f"{label} strain={self.strain:.6g} rate={self.rate:.6g}"


@dataclass(frozen=True, eq=False)
class Sample:
    """A grid point with its state and ground-truth stress."""

    point: GridPoint
    state: DeformationState
    truth: SymTensor3


def grid_points(
    grid: ModeGrid, grid_index: int = 0, region: Optional[str] = None
) -> List[GridPoint]:
    """Rates outermost, strains innermost."""
    return [
        GridPoint(
            mode=grid.mode,
            strain=float(strain),
            rate=float(rate),
            region=region or grid.region,
            grid=grid_index,
        )
        for rate in grid.rates
        for strain in grid.strain.values()
    ]


def sample_points(model: ConstitutiveModel, points: Iterable[GridPoint]) -> List[Sample]:
    """Evaluate the ground truth at each point.

    Raises:
        GenerationError: If a point lies outside the model's domain.
    """
    samples = []
    for point in points:
        try:
            state = mode_state(point.mode, point.strain, point.rate)
            truth = model.stress(state)
        except (DomainError, InvalidDeformationError) as exc:
            raise GenerationError(
                f"Grid point {point.describe()} is not admissible: {exc}"
            ) from exc
        samples.append(Sample(point=point, state=state, truth=truth))
    return samples


def sample_grids(
    model: ConstitutiveModel, grids: Sequence[ModeGrid], region: Optional[str] = None
) -> List[Sample]:
    points: List[GridPoint] = []
    for index, grid in enumerate(grids):
        points.extend(grid_points(grid, index, region))
    return sample_points(model, points)


def to_dataset(model: ConstitutiveModel, samples: Sequence[Sample]) -> BranchDataset:
    return BranchDataset(model.branch, tuple((s.state, s.truth) for s in samples))


def generate_dataset(spec: ExperimentSpec, grid: str = "training") -> BranchDataset:
    """Ground-truth records over the experiment's training or testing grids."""
    if grid not in ("training", "testing"):
        raise ValueError(f"grid must be 'training' or 'testing', got '{grid}'")
    model = spec.ground_truth.build()
    grids = spec.training if grid == "training" else spec.testing
    samples = sample_grids(model, grids, "training" if grid == "training" else None)
    data = to_dataset(model, samples)
    logger.info(f"Generated {len(data)} {grid} records from {model.family}")
    return data


def state_key(state: DeformationState) -> Tuple[float, ...]:
    """Hashable identity of a state's F and Ḟ, rounded to 12 decimals."""
    return tuple(np.round(np.concatenate([state.F.ravel(), state.Fdot.ravel()]), 12) + 0.0)


def record_samples(
    states: Sequence[DeformationState],
    truths: Sequence[SymTensor3],
    region: str = "same_mode",
) -> List[Sample]:
    """Wrap file records as samples of one region."""
    if len(states) != len(truths):
        raise ValueError(f"{len(states)} states but {len(truths)} stresses")
    point = GridPoint(mode=None, strain=float("nan"), rate=float("nan"), region=region)
    return [Sample(point=point, state=s, truth=t) for s, t in zip(states, truths)]
