"""Gaussian process regression with a shared Matérn 3/2 kernel.

Inputs and targets are standardized column-wise. All output columns share one
kernel and one Cholesky factorization; hyperparameters (log σ_f, log l) are
chosen by maximizing the log marginal likelihood summed over the columns, with
multi-start local search from a Latin-hypercube design on the bounds box.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg, optimize
from scipy.stats import qmc

from viscogp.core.config import GprSettings
from viscogp.core.errors import DuplicateInputError, FitError
from viscogp.gpr.kernel import (
    COINCIDENCE_TOLERANCE,
    KernelParams,
    distances,
    kernel_gradients,
    kernel_matrix,
)

logger = logging.getLogger(__name__)

CONSTANT_COLUMN_TOLERANCE = 1e-8
DUPLICATE_TARGET_TOLERANCE = 1e-9
LOG_2PI = float(np.log(2.0 * np.pi))

# Objective value for hyperparameters whose kernel matrix cannot be factorized.
_REJECTED = 1e25

Bounds = Sequence[Tuple[float, float]]


@dataclass(frozen=True, eq=False)
class Standardizer:
    """Column-wise affine scaling (x - mean) / scale."""

    mean: NDArray[np.float64]
    scale: NDArray[np.float64]

    @classmethod
    def from_data(cls, M: ArrayLike) -> "Standardizer":
        """Fit to a matrix; near-constant columns keep scale 1.

        A column counts as constant when its standard deviation is at most
        1e-8 of the largest magnitude in the matrix. The floor has the data's
        units, so a dataset in small units is standardized like any other.
        """
        M = np.asarray(M, dtype=float)
        std = M.std(axis=0)
        floor = CONSTANT_COLUMN_TOLERANCE * float(np.abs(M).max(initial=0.0))
        return cls(mean=M.mean(axis=0), scale=np.where(std <= floor, 1.0, std))

    def transform(self, M: ArrayLike) -> NDArray[np.float64]:
        return (np.asarray(M, dtype=float) - self.mean) / self.scale

    def inverse(self, M: ArrayLike) -> NDArray[np.float64]:
        return np.asarray(M, dtype=float) * self.scale + self.mean

    def to_dict(self) -> Dict[str, List[float]]:
        return {"mean": self.mean.tolist(), "scale": self.scale.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Standardizer":
        return cls(
            mean=np.asarray(data["mean"], dtype=float),
            scale=np.asarray(data["scale"], dtype=float),
        )


@dataclass(frozen=True, eq=False)
class TrainingData:
    """Standardized, de-duplicated training set."""

    X: NDArray[np.float64]
    Y: NDArray[np.float64]
    x_stats: Standardizer
    y_stats: Standardizer
    n_merged: int = 0


class _Posterior(NamedTuple):
    factor: Tuple[NDArray[np.float64], bool]
    weights: NDArray[np.float64]
    alpha: float
    log_likelihood: float


def _as_matrix(values: ArrayLike, name: str) -> NDArray[np.float64]:
    M = np.asarray(values, dtype=float)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    if M.ndim != 2:
        raise ValueError(f"{name} must be a 1-D or 2-D array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite values")
    return M


def prepare_training_data(X: ArrayLike, Y: ArrayLike) -> TrainingData:
    """Validate, de-duplicate and standardize a training set.

    Rows whose standardized inputs coincide are merged when their targets agree.

    Raises:
        DuplicateInputError: If coincident inputs carry different targets.
        FitError: If fewer than two distinct inputs remain.
    """
    X = _as_matrix(X, "X")
    Y = _as_matrix(Y, "Y")
    if X.shape[0] != Y.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")

    scaled = Standardizer.from_data(X).transform(X)
    d = distances(scaled, scaled)
    target_tol = DUPLICATE_TARGET_TOLERANCE * float(np.abs(Y).max(initial=0.0))
    keep: List[int] = []
    for i in range(X.shape[0]):
        earlier = np.flatnonzero(d[i, :i] <= COINCIDENCE_TOLERANCE)
        if earlier.size == 0:
            keep.append(i)
            continue
        j = int(earlier[0])
        if np.max(np.abs(Y[i] - Y[j])) > target_tol:
            raise DuplicateInputError(
                f"Training rows {j} and {i} share an input but have different targets"
            )

    n_merged = X.shape[0] - len(keep)
    if n_merged:
        logger.debug(f"Merged {n_merged} duplicate training row(s)")
    X, Y = X[keep], Y[keep]
    if X.shape[0] < 2:
        raise FitError(f"Need at least 2 distinct training inputs, got {X.shape[0]}")

    x_stats = Standardizer.from_data(X)
    y_stats = Standardizer.from_data(Y)
    return TrainingData(
        X=x_stats.transform(X),
        Y=y_stats.transform(Y),
        x_stats=x_stats,
        y_stats=y_stats,
        n_merged=n_merged,
    )


def _factorize(
    K: NDArray[np.float64], alpha: float, escalations: int
) -> Tuple[Tuple[NDArray[np.float64], bool], float]:
    """Cholesky of K + jitter·I, escalating the jitter ×10 on failure."""
    identity = np.eye(K.shape[0])
    jitter = alpha
    for attempt in range(escalations + 1):
        try:
            return linalg.cho_factor(K + jitter * identity, lower=True), jitter
        except linalg.LinAlgError:
            if attempt < escalations:
                jitter = 10.0 * jitter if jitter > 0.0 else 1e-10
                logger.debug(f"Kernel matrix not positive-definite, jitter raised to {jitter:.1e}")
    raise FitError(
        f"Kernel matrix is not positive-definite after {escalations} jitter escalation(s)"
    )


def _condition(
    data: TrainingData, theta: ArrayLike, alpha: float, escalations: int = 0
) -> _Posterior:
    sigma_f, length_scale = np.exp(np.asarray(theta, dtype=float))
    K, _, _ = kernel_gradients(data.X, sigma_f, length_scale)
    factor, jitter = _factorize(K, alpha, escalations)
    weights = linalg.cho_solve(factor, data.Y)
    n, m = data.Y.shape
    value = (
        -0.5 * float(np.sum(data.Y * weights))
        - m * float(np.sum(np.log(np.diag(factor[0]))))
        - 0.5 * n * m * LOG_2PI
    )
    return _Posterior(factor=factor, weights=weights, alpha=jitter, log_likelihood=value)


def _gradient(data: TrainingData, theta: ArrayLike, posterior: _Posterior) -> NDArray[np.float64]:
    """∂ log p / ∂(log σ_f, log l) = ½ tr((A Aᵀ - m K⁻¹) ∂K)."""
    sigma_f, length_scale = np.exp(np.asarray(theta, dtype=float))
    _, dK_sigma, dK_length = kernel_gradients(data.X, sigma_f, length_scale)
    n, m = data.Y.shape
    K_inv = linalg.cho_solve(posterior.factor, np.eye(n))
    inner = posterior.weights @ posterior.weights.T - m * K_inv
    return 0.5 * np.array([np.sum(inner * dK_sigma), np.sum(inner * dK_length)])


def log_marginal_likelihood(
    X: ArrayLike,
    Y: ArrayLike,
    theta: ArrayLike,
    alpha: float = 1e-4,
    gradient: bool = False,
) -> Any:
    """Log marginal likelihood of raw data at θ = (log σ_f, log l).

    Returns the value, or ``(value, gradient)`` when ``gradient`` is set.
    """
    data = prepare_training_data(X, Y)
    posterior = _condition(data, theta, alpha)
    if gradient:
        return posterior.log_likelihood, _gradient(data, theta, posterior)
    return posterior.log_likelihood


def restart_points(bounds: Bounds, n_restarts: int, seed: int) -> NDArray[np.float64]:
    """Latin-hypercube start points scaled to the bounds box."""
    lows, highs = np.asarray(bounds, dtype=float).T
    sampler = qmc.LatinHypercube(d=len(lows), seed=seed)
    return qmc.scale(sampler.random(n_restarts), lows, highs)


@dataclass(frozen=True, eq=False)
class GpModel:
    """A conditioned Gaussian process.

    ``X`` and ``Y`` hold standardized training data; ``params.alpha`` is the
    noise actually used, after any jitter escalation.
    """

    X: NDArray[np.float64]
    Y: NDArray[np.float64]
    params: KernelParams
    x_stats: Standardizer
    y_stats: Standardizer
    converged: bool = True
    log_likelihood: float = float("nan")
    _factor: Tuple[NDArray[np.float64], bool] = field(init=False, repr=False)
    _weights: NDArray[np.float64] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        X = np.array(self.X, dtype=float)
        Y = np.array(self.Y, dtype=float)
        X.setflags(write=False)
        Y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        try:
            factor = linalg.cho_factor(kernel_matrix(X, X, self.params), lower=True)
        except linalg.LinAlgError as exc:
            raise FitError("Kernel matrix of the stored model is not positive-definite") from exc
        object.__setattr__(self, "_factor", factor)
        object.__setattr__(self, "_weights", linalg.cho_solve(factor, Y))

    @property
    def n_train(self) -> int:
        return int(self.X.shape[0])

    @property
    def n_inputs(self) -> int:
        return int(self.X.shape[1])

    @property
    def n_outputs(self) -> int:
        return int(self.Y.shape[1])

    @property
    def theta(self) -> NDArray[np.float64]:
        return self.params.theta

    def _query(self, x_star: ArrayLike) -> NDArray[np.float64]:
        Xq = np.asarray(x_star, dtype=float)
        if Xq.ndim == 1:
            Xq = Xq.reshape(1, -1)
        if Xq.shape[1] != self.n_inputs:
            raise ValueError(f"Query has {Xq.shape[1]} inputs, model expects {self.n_inputs}")
        return self.x_stats.transform(Xq)

    def predict_standardized(self, x_star: ArrayLike) -> NDArray[np.float64]:
        """Posterior mean in standardized target units, one row per query."""
        Ks = kernel_matrix(self.X, self._query(x_star), self.params)
        return Ks.T @ self._weights

    def predict(self, x_star: ArrayLike) -> NDArray[np.float64]:
        """Posterior mean in raw target units, one row per query."""
        return self.y_stats.inverse(self.predict_standardized(x_star))

    def predict_variance(self, x_star: ArrayLike) -> NDArray[np.float64]:
        """Posterior variance in standardized target units, clamped at zero."""
        Xq = self._query(x_star)
        Ks = kernel_matrix(self.X, Xq, self.params)
        prior = self.params.sigma_f**2 + self.params.alpha
        reduction = np.sum(Ks * linalg.cho_solve(self._factor, Ks), axis=0)
        return np.maximum(prior - reduction, 0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theta": self.theta.tolist(),
            "alpha": self.params.alpha,
            "stats": {"x": self.x_stats.to_dict(), "y": self.y_stats.to_dict()},
            "X": self.X.tolist(),
            "Y": self.Y.tolist(),
            "converged": self.converged,
            "log_likelihood": self.log_likelihood,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GpModel":
        return cls(
            X=np.asarray(data["X"], dtype=float),
            Y=np.asarray(data["Y"], dtype=float),
            params=KernelParams.from_theta(data["theta"], float(data["alpha"])),
            x_stats=Standardizer.from_dict(data["stats"]["x"]),
            y_stats=Standardizer.from_dict(data["stats"]["y"]),
            converged=bool(data.get("converged", True)),
            log_likelihood=float(data.get("log_likelihood", float("nan"))),
        )


def model_at(
    data: TrainingData,
    theta: ArrayLike,
    alpha: float,
    escalations: int = 3,
    converged: bool = True,
) -> GpModel:
    """Condition on prepared data at fixed hyperparameters."""
    posterior = _condition(data, theta, alpha, escalations)
    if posterior.alpha != alpha:
        logger.warning(f"Noise raised from {alpha:.1e} to {posterior.alpha:.1e} to factorize")
    return GpModel(
        X=data.X,
        Y=data.Y,
        params=KernelParams.from_theta(theta, posterior.alpha),
        x_stats=data.x_stats,
        y_stats=data.y_stats,
        converged=converged,
        log_likelihood=posterior.log_likelihood,
    )


def fit_at_theta(X: ArrayLike, Y: ArrayLike, theta: ArrayLike, alpha: float = 1e-4) -> GpModel:
    """Condition raw data at fixed hyperparameters, without optimization."""
    return model_at(prepare_training_data(X, Y), theta, alpha)


def _objective(data: TrainingData, alpha: float, with_gradient: bool) -> Any:
    def negative(theta: NDArray[np.float64]) -> Any:
        try:
            posterior = _condition(data, theta, alpha)
        except FitError:
            return (_REJECTED, np.zeros(2)) if with_gradient else _REJECTED
        if not np.isfinite(posterior.log_likelihood):
            return (_REJECTED, np.zeros(2)) if with_gradient else _REJECTED
        if with_gradient:
            return -posterior.log_likelihood, -_gradient(data, theta, posterior)
        return -posterior.log_likelihood

    return negative


def multistart_minimize(
    objective: Any,
    starts: NDArray[np.float64],
    bounds: Bounds,
    settings: GprSettings,
    method: Optional[str] = None,
) -> optimize.OptimizeResult:
    """Run one bounded local search per start and keep the lowest objective."""
    method = method or settings.method
    best: Optional[optimize.OptimizeResult] = None
    for k, start in enumerate(starts):
        result = optimize.minimize(
            objective,
            start,
            method=method,
            jac=method == "L-BFGS-B",
            bounds=list(bounds),
            options={"maxiter": settings.max_iter},
        )
        logger.debug(
            f"Restart {k + 1}/{len(starts)}: θ={np.round(result.x, 4).tolist()} "
            f"objective={float(result.fun):.6g} success={result.success}"
        )
        if best is None or result.fun < best.fun:
            best = result
    assert best is not None
    return best


def fit(
    X: ArrayLike,
    Y: ArrayLike,
    alpha: Optional[float] = None,
    bounds: Optional[Bounds] = None,
    settings: Optional[GprSettings] = None,
    seed: int = 0,
) -> GpModel:
    """Train a Gaussian process by maximum marginal likelihood.

    Args:
        X: Raw inputs, N x n_i.
        Y: Raw targets, N x n_o (1-D is one column).
        alpha: Noise added at coincident inputs; defaults to ``settings.alpha``.
        bounds: Box on (log σ_f, log l); defaults to the settings' bounds.
        settings: Optimizer configuration.
        seed: Seed of the restart design.

    Returns:
        The conditioned model. ``converged`` is False when the best restart did
        not report convergence.

    Raises:
        DuplicateInputError: If coincident inputs carry different targets.
        FitError: If the kernel matrix cannot be factorized.
    """
    settings = settings or GprSettings()
    alpha = settings.alpha if alpha is None else alpha
    bounds = list(bounds or settings.bounds)

    data = prepare_training_data(X, Y)
    starts = restart_points(bounds, settings.n_restarts, seed)
    with_gradient = settings.method == "L-BFGS-B"
    best = multistart_minimize(_objective(data, alpha, with_gradient), starts, bounds, settings)
    if best.fun >= _REJECTED:
        raise FitError("No restart produced a factorizable kernel matrix")

    converged = bool(best.success)
    if not converged:
        logger.warning(f"Hyperparameter search did not converge: {best.message}")

    model = model_at(data, best.x, alpha, settings.jitter_escalations, converged)
    logger.info(
        f"Fitted GP on {model.n_train} points ({model.n_inputs} in, {model.n_outputs} out): "
        f"σ_f={model.params.sigma_f:.4g}, l={model.params.length_scale:.4g}, "
        f"log-likelihood={model.log_likelihood:.6g}"
    )
    return model


def predict(model: GpModel, x_star: ArrayLike) -> NDArray[np.float64]:
    """Posterior mean. A single input vector gives a single output vector."""
    single = np.ndim(x_star) == 1
    result = model.predict(x_star)
    return result[0] if single else result


def predict_variance(model: GpModel, x_star: ArrayLike) -> Any:
    """Posterior variance, standardized units. A single input vector gives a scalar."""
    single = np.ndim(x_star) == 1
    result = model.predict_variance(x_star)
    return float(result[0]) if single else result
