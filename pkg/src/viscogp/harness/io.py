"""Dataset CSV and model JSON files.

Dataset schema (header row required)::

    F11 F12 F13 F21 … F33, Fdot11 … Fdot33, S11 S22 S33 S23 S13 S12

Floats are written with 17 significant digits so values round-trip exactly.
"""

import json
import logging
from pathlib import Path
from typing import Any, List, Sequence, Tuple

import numpy as np
import pandas as pd

from viscogp.analytic.coefficients import Branch
from viscogp.continuum.kinematics import DeformationState, kinematics_from
from viscogp.continuum.tensors import VOIGT_LABELS, SymTensor3
from viscogp.core.errors import DatasetFormatError, InvalidDeformationError
from viscogp.core.paths import (
    ALLOWED_DATASETS,
    ALLOWED_MODELS,
    atomic_write_text,
    validate_file_type,
)
from viscogp.surrogate.dataset import BranchDataset
from viscogp.surrogate.models import model_from_envelope

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

F_COLUMNS = [f"F{i}{j}" for i in range(1, 4) for j in range(1, 4)]
FDOT_COLUMNS = [f"Fdot{i}{j}" for i in range(1, 4) for j in range(1, 4)]
S_COLUMNS = [f"S{label}" for label in VOIGT_LABELS]
DATASET_COLUMNS = F_COLUMNS + FDOT_COLUMNS + S_COLUMNS


def _frame(states: Sequence[DeformationState], stresses: Sequence[SymTensor3]) -> pd.DataFrame:
    rows = [
        np.concatenate([state.F.ravel(), state.Fdot.ravel(), stress.voigt])
        for state, stress in zip(states, stresses)
    ]
    values = np.asarray(rows).reshape(-1, len(DATASET_COLUMNS))
    return pd.DataFrame(values, columns=DATASET_COLUMNS)


def write_records(
    path: Path, states: Sequence[DeformationState], stresses: Sequence[SymTensor3]
) -> Path:
    """Write (state, stress) records in the dataset schema."""
    if len(states) != len(stresses):
        raise ValueError(f"{len(states)} states but {len(stresses)} stresses")
    path = validate_file_type(Path(path), ALLOWED_DATASETS, "dataset")
    csv = _frame(states, stresses).to_csv(index=False, float_format=FLOAT_FORMAT)
    atomic_write_text(path, csv)
    logger.info(f"Wrote {len(states)} records to {path}")
    return path


def write_dataset(path: Path, data: BranchDataset) -> Path:
    return write_records(path, data.states, data.stresses)


def _read_frame(path: Path, required: List[str]) -> pd.DataFrame:
    path = validate_file_type(Path(path), ALLOWED_DATASETS, "dataset")
    if not path.exists():
        raise FileNotFoundError(f"Dataset not found: {path}")
    frame = pd.read_csv(path, float_precision="round_trip")
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise DatasetFormatError(f"{path.name} is missing columns: {', '.join(missing)}")
    values = frame[required].to_numpy(dtype=float)
    if not np.all(np.isfinite(values)):
        raise DatasetFormatError(f"{path.name} contains empty or non-numeric values")
    return frame


def read_states(path: Path) -> List[DeformationState]:
    """States from a CSV with F columns and optional Fdot columns.

    Raises:
        DatasetFormatError: If columns are missing or a row is not a valid deformation.
    """
    return _states(_read_frame(path, F_COLUMNS))


def _states(frame: pd.DataFrame) -> List[DeformationState]:
    F_values = frame[F_COLUMNS].to_numpy(dtype=float).reshape(-1, 3, 3)
    if all(c in frame.columns for c in FDOT_COLUMNS):
        Fdot_values = frame[FDOT_COLUMNS].to_numpy(dtype=float).reshape(-1, 3, 3)
    else:
        Fdot_values = np.zeros_like(F_values)
    states = []
    for i, (F, Fdot) in enumerate(zip(F_values, Fdot_values)):
        try:
            states.append(kinematics_from(F, Fdot))
        except InvalidDeformationError as exc:
            raise DatasetFormatError(f"Row {i}: {exc}") from exc
    return states


def read_records(path: Path) -> Tuple[List[DeformationState], List[SymTensor3]]:
    frame = _read_frame(path, DATASET_COLUMNS)
    states = _states(frame)
    stresses = [SymTensor3(row) for row in frame[S_COLUMNS].to_numpy(dtype=float)]
    return states, stresses


def read_dataset(path: Path, branch: Branch) -> BranchDataset:
    """Load a dataset CSV as records of one branch."""
    states, stresses = read_records(path)
    data = BranchDataset(Branch(branch), tuple(zip(states, stresses)))
    logger.info(f"Read {len(data)} {data.branch.value} records from {path}")
    return data


def save_model(path: Path, model: Any) -> Path:
    """Write a model's JSON document."""
    path = validate_file_type(Path(path), ALLOWED_MODELS, "model")
    document = model.to_dict() if hasattr(model, "to_dict") else model.to_document()
    return atomic_write_text(path, json.dumps(document, indent=2))


def load_model(path: Path) -> Any:
    """Load any model file: surrogate, classical, composite or analytic."""
    path = validate_file_type(Path(path), ALLOWED_MODELS, "model")
    if not path.exists():
        raise FileNotFoundError(f"Model not found: {path}")
    with open(path) as f:
        try:
            document = json.load(f)
        except json.JSONDecodeError as exc:
            raise DatasetFormatError(f"{path.name} is not valid JSON: {exc}") from exc
    return model_from_envelope(document)
