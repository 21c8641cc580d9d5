"""Branch datasets and their invariant/coefficient counterparts."""

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from viscogp.analytic.coefficients import COEFFICIENT_NAMES, Branch
from viscogp.continuum.kinematics import (
    DeformationState,
    InvariantSet,
    integrity_basis,
    invariants,
    kinematics_from,
)
from viscogp.continuum.tensors import SymTensor3
from viscogp.core.errors import DatasetFormatError, ExtractionError
from viscogp.surrogate.extraction import extract_coefficients

logger = logging.getLogger(__name__)

INPUT_NAMES: Dict[Branch, Tuple[str, ...]] = {
    Branch.VOL: ("J",),
    Branch.H_ISO: ("I1bar", "I2bar"),
    Branch.V_ISO: ("I1bar", "I2bar", "J1bar", "J4bar", "J6bar"),
}

# Surrogate inputs of the undeformed, rate-free state.
REFERENCE_INPUTS: Dict[Branch, Tuple[float, ...]] = {
    Branch.VOL: (1.0,),
    Branch.H_ISO: (3.0, 3.0),
    Branch.V_ISO: (3.0, 3.0, 0.0, 0.0, 0.0),
}

REFERENCE_TOLERANCE = 1e-12

Record = Tuple[DeformationState, SymTensor3]


def surrogate_inputs(branch: Branch, inv: InvariantSet) -> NDArray[np.float64]:
    """The invariants a branch surrogate reads, in input order."""
    return np.array([getattr(inv, name) for name in INPUT_NAMES[Branch(branch)]])


@dataclass(frozen=True, eq=False)
class BranchDataset:
    """(state, branch stress) records of one stress branch.

    Viscous records must carry a deformation rate; volumetric and
    hyperelastic records must not.
    """

    branch: Branch
    records: Tuple[Record, ...]

    def __post_init__(self) -> None:
        branch = Branch(self.branch)
        records = tuple(self.records)
        for i, (state, _) in enumerate(records):
            if branch is Branch.V_ISO and state.is_quasi_static:
                raise DatasetFormatError(f"Record {i}: viscous records need a nonzero Fdot")
            if branch is not Branch.V_ISO and not state.is_quasi_static:
                raise DatasetFormatError(
                    f"Record {i}: {branch.value} records must be quasi-static"
                )
        object.__setattr__(self, "branch", branch)
        object.__setattr__(self, "records", records)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def states(self) -> List[DeformationState]:
        return [state for state, _ in self.records]

    @property
    def stresses(self) -> List[SymTensor3]:
        return [stress for _, stress in self.records]

    def stress_scale(self) -> float:
        """Largest Frobenius norm among the record stresses."""
        return max((stress.norm() for _, stress in self.records), default=0.0)


def records_hash(records: Sequence[Record], salt: str = "") -> str:
    """Short sha256 content hash of (state, stress) records."""
    digest = hashlib.sha256(salt.encode())
    for state, stress in records:
        digest.update(np.ascontiguousarray(state.F).tobytes())
        digest.update(np.ascontiguousarray(state.Fdot).tobytes())
        digest.update(np.ascontiguousarray(stress.voigt).tobytes())
    return digest.hexdigest()[:12]


def dataset_hash(data: BranchDataset) -> str:
    """Provenance hash of a dataset, salted with its branch."""
    return records_hash(data.records, data.branch.value)


@dataclass(frozen=True, eq=False)
class StarDataset:
    """Invariant inputs and extracted coefficients, one row per source record."""

    branch: Branch
    inputs: NDArray[np.float64]
    outputs: NDArray[np.float64]
    states: Tuple[DeformationState, ...]
    residuals: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0))
    source_hash: str = ""

    def __post_init__(self) -> None:
        branch = Branch(self.branch)
        inputs = np.asarray(self.inputs, dtype=float).reshape(-1, len(INPUT_NAMES[branch]))
        outputs = np.asarray(self.outputs, dtype=float).reshape(-1, len(COEFFICIENT_NAMES[branch]))
        if inputs.shape[0] != outputs.shape[0] or inputs.shape[0] != len(self.states):
            raise ValueError(
                f"Row counts disagree: {inputs.shape[0]} inputs, {outputs.shape[0]} outputs, "
                f"{len(self.states)} states"
            )
        object.__setattr__(self, "branch", branch)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)
        object.__setattr__(self, "states", tuple(self.states))

    def __len__(self) -> int:
        return int(self.inputs.shape[0])

    @property
    def input_names(self) -> Tuple[str, ...]:
        return INPUT_NAMES[self.branch]

    @property
    def output_names(self) -> Tuple[str, ...]:
        return COEFFICIENT_NAMES[self.branch]

    def has_reference_row(self) -> bool:
        reference = np.array(REFERENCE_INPUTS[self.branch])
        return bool(np.any(np.all(np.abs(self.inputs - reference) <= REFERENCE_TOLERANCE, axis=1)))

    def with_reference_row(self) -> "StarDataset":
        """This dataset, with the undeformed zero-stress row appended if missing."""
        if self.has_reference_row():
            return self
        logger.info(f"Appending the reference row to the {self.branch.value} dataset")
        n_out = len(COEFFICIENT_NAMES[self.branch])
        return StarDataset(
            branch=self.branch,
            inputs=np.vstack([self.inputs, REFERENCE_INPUTS[self.branch]]),
            outputs=np.vstack([self.outputs, np.zeros(n_out)]),
            states=self.states + (kinematics_from(np.eye(3)),),
            residuals=np.append(self.residuals, 0.0) if self.residuals.size else self.residuals,
            source_hash=self.source_hash,
        )


def build_star_dataset(data: BranchDataset) -> StarDataset:
    """Map every record to (invariant inputs, extracted coefficients).

    Raises:
        ExtractionError: Naming the index of the record that failed.
    """
    inputs, outputs, residuals = [], [], []
    for i, (state, stress) in enumerate(data.records):
        try:
            extraction = extract_coefficients(data.branch, state, stress, integrity_basis(state))
        except ExtractionError as exc:
            raise ExtractionError(f"Record {i}: {exc}") from exc
        inputs.append(surrogate_inputs(data.branch, invariants(state)))
        outputs.append(extraction.coefficients.values)
        residuals.append(extraction.residual)

    residual_array = np.asarray(residuals, dtype=float)
    if residual_array.size:
        logger.info(
            f"Built {data.branch.value} dataset: {len(data)} rows, "
            f"max reconstruction residual {residual_array.max():.2e}"
        )
    return StarDataset(
        branch=data.branch,
        inputs=np.asarray(inputs, dtype=float),
        outputs=np.asarray(outputs, dtype=float),
        states=tuple(data.states),
        residuals=residual_array,
        source_hash=dataset_hash(data),
    )
