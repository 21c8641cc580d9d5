"""Percent relative error metrics."""

from typing import Iterable, Optional

import numpy as np

from viscogp.continuum.tensors import SymTensor3


def err(pred: SymTensor3, truth: SymTensor3) -> Optional[float]:
    """100 · ‖pred - truth‖ / ‖truth‖ on Voigt vectors.

    Returns None when the truth is identically zero; callers exclude such points.
    """
    scale = float(np.linalg.norm(truth.voigt))
    if scale == 0.0:
        return None
    return 100.0 * float(np.linalg.norm(pred.voigt - truth.voigt)) / scale


def mean_err(errs: Iterable[Optional[float]]) -> Optional[float]:
    """Arithmetic mean of the defined errors; None for an empty list."""
    values = [e for e in errs if e is not None]
    if not values:
        return None
    return float(np.mean(values))
