"""Core viscogp functionality: errors, paths and configuration."""

from viscogp.core.errors import (
    CalibrationError,
    ConstrainedFitError,
    DatasetFormatError,
    DomainError,
    DuplicateInputError,
    ExperimentError,
    ExtractionError,
    FitError,
    GenerationError,
    InvalidDeformationError,
    ViscoGPError,
)
from viscogp.core.paths import (
    OUTPUT_DIR_ENV,
    PathValidationError,
    atomic_write_text,
    resolve_output_dir,
    validate_file_type,
)

__all__ = [
    "ViscoGPError",
    "InvalidDeformationError",
    "DomainError",
    "CalibrationError",
    "FitError",
    "DuplicateInputError",
    "ConstrainedFitError",
    "ExtractionError",
    "GenerationError",
    "ExperimentError",
    "DatasetFormatError",
    "PathValidationError",
    "OUTPUT_DIR_ENV",
    "atomic_write_text",
    "resolve_output_dir",
    "validate_file_type",
]
