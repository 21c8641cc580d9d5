"""Gaussian process regression: Matérn 3/2 kernel, likelihood training, constraints."""

from viscogp.gpr.constraints import (
    ConstraintSet,
    constraint_values,
    fit_constrained,
    is_feasible,
)
from viscogp.gpr.kernel import KernelParams, kernel_eval, kernel_matrix
from viscogp.gpr.model import (
    GpModel,
    Standardizer,
    fit,
    fit_at_theta,
    log_marginal_likelihood,
    predict,
    predict_variance,
    restart_points,
)

__all__ = [
    "KernelParams",
    "kernel_eval",
    "kernel_matrix",
    "GpModel",
    "Standardizer",
    "fit",
    "fit_at_theta",
    "log_marginal_likelihood",
    "predict",
    "predict_variance",
    "restart_points",
    "ConstraintSet",
    "constraint_values",
    "fit_constrained",
    "is_feasible",
]
