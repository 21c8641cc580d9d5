"""Invariant-based surrogates: coefficient extraction, training and stress reconstruction."""

from viscogp.surrogate.dataset import (
    INPUT_NAMES,
    BranchDataset,
    StarDataset,
    build_star_dataset,
    dataset_hash,
    records_hash,
    surrogate_inputs,
)
from viscogp.surrogate.extraction import Extraction, extract_coefficients
from viscogp.surrogate.models import (
    ClassicalModel,
    CompositeSurrogate,
    SurrogateModel,
    dissipation,
    dissipation_constraints,
    dissipation_functional,
    model_from_envelope,
    predict_stress,
    train_classical,
    train_surrogate,
)

__all__ = [
    "INPUT_NAMES",
    "BranchDataset",
    "StarDataset",
    "build_star_dataset",
    "dataset_hash",
    "records_hash",
    "surrogate_inputs",
    "Extraction",
    "extract_coefficients",
    "SurrogateModel",
    "ClassicalModel",
    "CompositeSurrogate",
    "train_surrogate",
    "train_classical",
    "predict_stress",
    "dissipation",
    "dissipation_functional",
    "dissipation_constraints",
    "model_from_envelope",
]
