"""Hyperparameter search restricted by linear inequality constraints on predictions.

Each constraint is a point x_k and a functional c_k over the outputs, and asks
for c_k · ỹ(x_k) ≥ 0. Values are compared in standardized units:

    g_k = c_k · ỹ(x_k) / ‖c_k ⊙ s_y‖

where s_y is the target scale.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from viscogp.core.config import GprSettings
from viscogp.core.errors import ConstrainedFitError, FitError
from viscogp.gpr.kernel import COINCIDENCE_TOLERANCE, distances, matern32
from viscogp.gpr.model import (
    Bounds,
    GpModel,
    Standardizer,
    _condition,
    fit,
    model_at,
    multistart_minimize,
    prepare_training_data,
    restart_points,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ConstraintSet:
    """Constraint points (raw inputs) with one output functional per point."""

    points: NDArray[np.float64]
    functionals: NDArray[np.float64]

    def __post_init__(self) -> None:
        points = np.atleast_2d(np.asarray(self.points, dtype=float))
        functionals = np.atleast_2d(np.asarray(self.functionals, dtype=float))
        if points.shape[0] == 0:
            raise ValueError("A constraint set needs at least one point")
        if points.shape[0] != functionals.shape[0]:
            raise ValueError(
                f"{points.shape[0]} constraint points but {functionals.shape[0]} functionals"
            )
        empty = np.flatnonzero(~np.any(functionals != 0.0, axis=1))
        if empty.size:
            raise ValueError(f"Constraint functional {int(empty[0])} has no nonzero coefficient")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "functionals", functionals)

    def __len__(self) -> int:
        return int(self.points.shape[0])


def _normalizers(constraints: ConstraintSet, y_stats: Standardizer) -> NDArray[np.float64]:
    return np.linalg.norm(constraints.functionals * y_stats.scale, axis=1)


def constraint_values(model: GpModel, constraints: ConstraintSet) -> NDArray[np.float64]:
    """Standardized constraint values g_k for a fitted model."""
    raw = model.predict(constraints.points)
    return np.sum(constraints.functionals * raw, axis=1) / _normalizers(constraints, model.y_stats)


def is_feasible(model: GpModel, constraints: ConstraintSet, tolerance: float = 1e-8) -> bool:
    return bool(constraint_values(model, constraints).min() >= -tolerance)


@dataclass
class _Search:
    """Book-keeping across every θ the penalized search evaluates."""

    tolerance: float
    best_theta: Optional[NDArray[np.float64]] = None
    best_log_likelihood: float = -np.inf
    least_violated: Tuple[float, int] = (-np.inf, -1)
    n_evaluated: int = 0

    def record(
        self, theta: NDArray[np.float64], log_likelihood: float, g: NDArray[np.float64]
    ) -> None:
        self.n_evaluated += 1
        worst = int(np.argmin(g))
        if g[worst] >= -self.tolerance:
            if log_likelihood > self.best_log_likelihood:
                self.best_theta = np.array(theta, dtype=float)
                self.best_log_likelihood = log_likelihood
        elif g[worst] > self.least_violated[0]:
            self.least_violated = (float(g[worst]), worst)


def fit_constrained(
    X: ArrayLike,
    Y: ArrayLike,
    constraints: ConstraintSet,
    alpha: Optional[float] = None,
    bounds: Optional[Bounds] = None,
    settings: Optional[GprSettings] = None,
    seed: int = 0,
) -> GpModel:
    """Maximize the marginal likelihood subject to c_k · ỹ(x_k) ≥ 0.

    The unconstrained optimum is returned unchanged when it is feasible.
    Otherwise an exterior penalty w · Σ min(0, g_k)² is added to the negative
    log likelihood for each weight in ``settings.penalty_weights``, and the
    feasible θ with the highest likelihood among all evaluated θ is kept.

    Raises:
        ConstrainedFitError: If no evaluated θ is feasible. Reports the
            most-violated point of the least-infeasible θ.
    """
    settings = settings or GprSettings()
    alpha = settings.alpha if alpha is None else alpha
    bounds = list(bounds or settings.bounds)
    tolerance = settings.feasibility_tol

    model = fit(X, Y, alpha=alpha, bounds=bounds, settings=settings, seed=seed)
    g = constraint_values(model, constraints)
    if g.min() >= -tolerance:
        logger.info(f"Unconstrained optimum satisfies all {len(constraints)} constraints")
        return model

    worst = int(np.argmin(g))
    logger.warning(
        f"Unconstrained optimum violates constraint {worst} (g={g[worst]:.3e}); "
        f"starting penalized search"
    )

    data = prepare_training_data(X, Y)
    Xc = data.x_stats.transform(constraints.points)
    d_c = distances(Xc, data.X)
    coincident = d_c <= COINCIDENCE_TOLERANCE
    offset = constraints.functionals @ data.y_stats.mean
    scaled = constraints.functionals * data.y_stats.scale
    norms = _normalizers(constraints, data.y_stats)

    search = _Search(tolerance=tolerance)
    search.least_violated = (float(g[worst]), worst)

    def penalized(weight: float) -> Callable[[NDArray[np.float64]], float]:
        def objective(theta: NDArray[np.float64]) -> float:
            try:
                posterior = _condition(data, theta, alpha)
            except FitError:
                return 1e25
            sigma_f, length_scale = np.exp(theta)
            Kc = matern32(d_c, sigma_f, length_scale) + alpha * coincident
            values = (offset + np.sum(scaled * (Kc @ posterior.weights), axis=1)) / norms
            search.record(theta, posterior.log_likelihood, values)
            shortfall = np.minimum(values, 0.0)
            return -posterior.log_likelihood + weight * float(np.sum(shortfall**2))

        return objective

    start = model.theta
    starts = restart_points(bounds, settings.n_restarts, seed)
    for weight in settings.penalty_weights:
        result = multistart_minimize(
            penalized(weight), np.vstack([start, starts]), bounds, settings, method="Nelder-Mead"
        )
        start = result.x
        logger.debug(f"Penalty weight {weight:.0e}: best θ={np.round(result.x, 4).tolist()}")
        if search.best_theta is not None:
            break

    if search.best_theta is None:
        violation, index = search.least_violated
        raise ConstrainedFitError(
            f"No feasible hyperparameters among {search.n_evaluated} evaluated; "
            f"constraint point {index} is violated by {violation:.3e}",
            point_index=index,
            violation=violation,
        )

    constrained = model_at(data, search.best_theta, alpha, settings.jitter_escalations)
    g = constraint_values(constrained, constraints)
    if g.min() < -tolerance:
        index = int(np.argmin(g))
        raise ConstrainedFitError(
            f"Constrained model violates point {index} by {g[index]:.3e} after conditioning",
            point_index=index,
            violation=float(g[index]),
        )
    logger.info(
        f"Constrained fit: σ_f={constrained.params.sigma_f:.4g}, "
        f"l={constrained.params.length_scale:.4g}, log-likelihood={constrained.log_likelihood:.6g}"
    )
    return constrained
