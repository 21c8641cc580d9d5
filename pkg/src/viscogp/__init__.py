"""
viscogp - physics-augmented Gaussian process constitutive models

Invariant-based surrogates for visco-hyperelastic materials, with the
analytic models, baselines and experiment harness used to evaluate them.
"""

__version__ = "0.1.0a1"

from viscogp.core.config import ExperimentSpec, GprSettings
from viscogp.core.errors import ViscoGPError

__all__ = [
    "__version__",
    "ExperimentSpec",
    "GprSettings",
    "ViscoGPError",
]
