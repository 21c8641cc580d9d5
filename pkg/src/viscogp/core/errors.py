"""Exception hierarchy for viscogp.

Every failure raised by the library derives from ``ViscoGPError`` so the CLI can
report it uniformly. Failures caused by bad input values also derive from
``ValueError``.
"""

from typing import Any, Dict, List, Optional


class ViscoGPError(Exception):
    """Base class for all viscogp errors."""
    pass


class InvalidDeformationError(ViscoGPError, ValueError):
    """Raised for non-invertible or orientation-reversing deformations."""
    pass


class DomainError(ViscoGPError, ValueError):
    """Raised when a state lies outside an analytic model's domain."""
    pass


class CalibrationError(ViscoGPError):
    """Raised when a least-squares calibration cannot identify its parameters.

    Attributes:
        directions: Parameter-space directions (unit vectors) that the data
            does not constrain.
    """

    def __init__(self, message: str, directions: Optional[List[List[float]]] = None):
        super().__init__(message)
        self.directions = directions or []


class FitError(ViscoGPError):
    """Raised when a Gaussian process cannot be conditioned on its data."""
    pass


class DuplicateInputError(FitError, ValueError):
    """Raised for coincident training inputs carrying different targets."""
    pass


class ConstrainedFitError(FitError):
    """Raised when no evaluated hyperparameter satisfies the constraint set.

    Attributes:
        point_index: Index of the most-violated constraint point.
        violation: Constraint value there, in standardized units.
    """

    def __init__(self, message: str, point_index: int, violation: float):
        super().__init__(message)
        self.point_index = point_index
        self.violation = violation


class ExtractionError(ViscoGPError):
    """Raised when stress data cannot be expressed in a branch's basis."""
    pass


class GenerationError(ViscoGPError):
    """Raised when a grid point falls outside the ground-truth model's domain."""
    pass


class ExperimentError(ViscoGPError):
    """Raised when an experiment run fails; wraps the underlying error."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.context = context or {}


class DatasetFormatError(ViscoGPError, ValueError):
    """Raised when a dataset or model file does not follow the expected schema."""
    pass
