"""Least-squares calibration of the analytic models against stress data."""

import logging
from dataclasses import dataclass
from typing import Any, Callable, List, Literal, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import ValidationError
from scipy import linalg, optimize

from viscogp.analytic.coefficients import design_matrix
from viscogp.analytic.models import ConstitutiveModel, resolve_family
from viscogp.continuum.kinematics import (
    DeformationState,
    InvariantSet,
    integrity_basis,
    invariants,
)
from viscogp.continuum.tensors import SymTensor3
from viscogp.core.errors import CalibrationError, DomainError

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-10

Components = Literal["all", "loading"]

# Frobenius weights on Voigt rows: off-diagonal entries appear twice in the full tensor.
_FROBENIUS_WEIGHTS = np.array([1.0, 1.0, 1.0, np.sqrt(2.0), np.sqrt(2.0), np.sqrt(2.0)])


@dataclass
class _Record:
    inv: InvariantSet
    design: NDArray[np.float64]


def _component_rows(components: Components) -> Tuple[NDArray[np.intp], NDArray[np.float64]]:
    if components == "all":
        return np.arange(6), _FROBENIUS_WEIGHTS
    if components == "loading":
        return np.array([0]), np.array([1.0])
    raise ValueError(f"components must be 'all' or 'loading', got '{components}'")


def _assemble(
    cls: type,
    records: List[_Record],
    shape: Optional[float],
    rows: NDArray[np.intp],
    weights: NDArray[np.float64],
) -> NDArray[np.float64]:
    blocks = []
    for record in records:
        terms = cls.coefficient_terms(record.inv, shape)  # type: ignore[attr-defined]
        blocks.append((record.design @ terms.T)[rows] * weights[:, None])
    return np.vstack(blocks)


def _solve(A: NDArray[np.float64], b: NDArray[np.float64]) -> Tuple[NDArray[np.float64], float]:
    """Solve min ||Ax - b|| and return (x, residual norm).

    Raises:
        CalibrationError: If A does not have full column rank.
    """
    _, singular_values, vt = linalg.svd(A, full_matrices=False)
    threshold = RANK_TOLERANCE * singular_values[0]
    deficient = [vt[i].tolist() for i, s in enumerate(singular_values) if s <= threshold]
    if deficient:
        raise CalibrationError(
            f"Calibration data does not determine all parameters; "
            f"{len(deficient)} deficient direction(s)",
            directions=deficient,
        )
    x, _, _, _ = linalg.lstsq(A, b)
    return x, float(np.linalg.norm(A @ x - b))


def calibrate(
    family: Any,
    dataset: Sequence[Tuple[DeformationState, SymTensor3]],
    components: Components = "all",
) -> ConstitutiveModel:
    """Fit a model family to (state, stress) pairs.

    Linear parameters come from a linear least-squares solve. Families with a
    shape parameter are scanned over their grid, and the best grid cell is
    refined with a bounded scalar search.

    Args:
        family: Family name (e.g. ``"yeoh"``) or model class.
        dataset: Pairs of deformation state and target branch stress.
        components: ``"all"`` for the squared Frobenius misfit over all
            components, ``"loading"`` for the 11 component only.

    Returns:
        The calibrated model.

    Raises:
        CalibrationError: If the data cannot identify the parameters.
    """
    cls = resolve_family(family)
    if not dataset:
        raise CalibrationError("Calibration dataset is empty")

    rows, weights = _component_rows(components)
    records = [
        _Record(
            inv=invariants(state),
            design=design_matrix(cls.branch, integrity_basis(state), state.J),
        )
        for state, _ in dataset
    ]
    b = np.concatenate([stress.voigt[rows] * weights for _, stress in dataset])

    def fit_at(shape: Optional[float]) -> Tuple[NDArray[np.float64], float]:
        return _solve(_assemble(cls, records, shape, rows, weights), b)

    if cls.shape_parameter is None:
        values, residual = fit_at(None)
        shape = None
    else:
        values, residual, shape = _scan_shape(cls, fit_at)

    params = dict(zip(cls.linear_parameters, (float(v) for v in values)))
    if shape is not None:
        params[cls.shape_parameter] = shape  # type: ignore[index]
    try:
        model = cls(**params)
    except ValidationError as exc:
        raise CalibrationError(
            f"Calibrated {cls.__name__} parameters are inadmissible: {params}"
        ) from exc

    logger.info(f"Calibrated {model.family}: {model.params} (residual {residual:.3e})")
    return model


def _scan_shape(
    cls: type, fit_at: Callable[[Optional[float]], Tuple[NDArray[np.float64], float]]
) -> Tuple[NDArray[np.float64], float, float]:
    grid = list(cls.shape_grid)  # type: ignore[attr-defined]
    residuals = np.full(len(grid), np.inf)
    last_error: Optional[Exception] = None
    for i, shape in enumerate(grid):
        try:
            residuals[i] = fit_at(shape)[1]
        except (DomainError, CalibrationError) as exc:
            last_error = exc
    if not np.isfinite(residuals).any():
        name = cls.shape_parameter  # type: ignore[attr-defined]
        raise CalibrationError(f"No admissible {name} on the calibration grid") from last_error

    best = int(np.argmin(residuals))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]

    def objective(shape: float) -> float:
        try:
            return fit_at(shape)[1]
        except (DomainError, CalibrationError):
            return np.inf

    shape = grid[best]
    if hi > lo:
        refined = optimize.minimize_scalar(objective, bounds=(lo, hi), method="bounded")
        # VolOgden's grid straddles zero; never refine onto β = 0.
        if refined.fun < residuals[best] and refined.x != 0.0:
            shape = float(refined.x)
    values, residual = fit_at(shape)
    return values, residual, float(shape)
