"""Matérn 3/2 covariance function.

    k(x, x') = σ_f² (1 + √3 d / l) exp(-√3 d / l) + α [x = x']

with d the Euclidean distance. The noise term α is added wherever two inputs
coincide, including in cross-covariances, so a query at a training input sees
the same covariance row the training matrix holds.
"""

from typing import Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field
from scipy.spatial.distance import cdist

# Inputs closer than this (standardized units) are the same point.
COINCIDENCE_TOLERANCE = 1e-12

SQRT3 = np.sqrt(3.0)


class KernelParams(BaseModel):
    """Hyperparameters of the Matérn 3/2 kernel."""

    model_config = ConfigDict(frozen=True)

    sigma_f: float = Field(gt=0)
    length_scale: float = Field(gt=0)
    alpha: float = Field(default=1e-4, ge=0)

    @classmethod
    def from_theta(cls, theta: ArrayLike, alpha: float) -> "KernelParams":
        log_sigma_f, log_l = np.asarray(theta, dtype=float)
        return cls(
            sigma_f=float(np.exp(log_sigma_f)),
            length_scale=float(np.exp(log_l)),
            alpha=alpha,
        )

    @property
    def theta(self) -> NDArray[np.float64]:
        """(log σ_f, log l)."""
        return np.array([np.log(self.sigma_f), np.log(self.length_scale)])


def _as_rows(X: ArrayLike) -> NDArray[np.float64]:
    X = np.asarray(X, dtype=float)
    return X.reshape(1, -1) if X.ndim == 1 else X


def distances(XA: ArrayLike, XB: ArrayLike) -> NDArray[np.float64]:
    return cdist(_as_rows(XA), _as_rows(XB), metric="euclidean")


def matern32(d: NDArray[np.float64], sigma_f: float, length_scale: float) -> NDArray[np.float64]:
    """Noise-free Matérn 3/2 covariance for a distance array."""
    r = SQRT3 * d / length_scale
    return sigma_f**2 * (1.0 + r) * np.exp(-r)


def kernel_matrix(XA: ArrayLike, XB: ArrayLike, params: KernelParams) -> NDArray[np.float64]:
    """Covariance between two input sets, noise included at coincident inputs."""
    d = distances(XA, XB)
    K = matern32(d, params.sigma_f, params.length_scale)
    if params.alpha > 0.0:
        K = K + params.alpha * (d <= COINCIDENCE_TOLERANCE)
    return K


def kernel_gradients(
    X: ArrayLike, sigma_f: float, length_scale: float
) -> Tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """Noise-free K(X, X) with its derivatives in log σ_f and log l."""
    d = distances(X, X)
    r = SQRT3 * d / length_scale
    decay = np.exp(-r)
    K = sigma_f**2 * (1.0 + r) * decay
    return K, 2.0 * K, sigma_f**2 * r**2 * decay


def kernel_eval(x: ArrayLike, x_prime: ArrayLike, params: KernelParams) -> float:
    """Kernel value for a single pair of input vectors."""
    x = np.asarray(x, dtype=float).reshape(-1)
    x_prime = np.asarray(x_prime, dtype=float).reshape(-1)
    if x.shape != x_prime.shape:
        raise ValueError(f"Input vectors differ in length: {x.shape[0]} vs {x_prime.shape[0]}")
    return float(kernel_matrix(x, x_prime, params)[0, 0])
