"""Symmetric second-order tensors in Voigt storage.

Voigt order is (11, 22, 33, 23, 13, 12) with unit shear weights: the vector holds
the tensor components themselves, not engineering shears.
"""

from dataclasses import dataclass
from typing import Iterable, List, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

VOIGT_INDEX: Tuple[Tuple[int, int], ...] = ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))
VOIGT_LABELS: Tuple[str, ...] = ("11", "22", "33", "23", "13", "12")

# Contracting two Voigt vectors with these weights gives the full double contraction.
_DDOT_WEIGHTS = np.array([1.0, 1.0, 1.0, 2.0, 2.0, 2.0])

Tensor3 = NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class SymTensor3:
    """Symmetric 3x3 tensor stored as six Voigt components."""

    voigt: NDArray[np.float64]

    def __post_init__(self) -> None:
        values = np.array(self.voigt, dtype=float).reshape(-1)
        if values.shape != (6,):
            raise ValueError(f"SymTensor3 needs 6 Voigt components, got {values.shape[0]}")
        values.setflags(write=False)
        object.__setattr__(self, "voigt", values)

    @classmethod
    def from_voigt(cls, values: Iterable[float]) -> "SymTensor3":
        return cls(np.fromiter(values, dtype=float))

    @classmethod
    def from_matrix(cls, matrix: ArrayLike) -> "SymTensor3":
        """Build from a 3x3 array, keeping its symmetric part."""
        m = np.asarray(matrix, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"Expected a 3x3 matrix, got shape {m.shape}")
        sym = 0.5 * (m + m.T)
        return cls(np.array([sym[i, j] for i, j in VOIGT_INDEX]))

    @classmethod
    def zeros(cls) -> "SymTensor3":
        return cls(np.zeros(6))

    @classmethod
    def identity(cls) -> "SymTensor3":
        return cls(np.array([1.0, 1.0, 1.0, 0.0, 0.0, 0.0]))

    @property
    def matrix(self) -> Tensor3:
        v = self.voigt
        return np.array([
            [v[0], v[5], v[4]],
            [v[5], v[1], v[3]],
            [v[4], v[3], v[2]],
        ])

    def ddot(self, other: "SymTensor3") -> float:
        """Full double contraction A : B, both off-diagonal halves included."""
        return float(np.dot(_DDOT_WEIGHTS * self.voigt, other.voigt))

    def norm(self) -> float:
        """Frobenius norm of the full 3x3 tensor."""
        return float(np.sqrt(self.ddot(self)))

    def trace(self) -> float:
        return float(self.voigt[:3].sum())

    def to_list(self) -> List[float]:
        return [float(v) for v in self.voigt]

    def allclose(self, other: "SymTensor3", rtol: float = 1e-9, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.voigt, other.voigt, rtol=rtol, atol=atol))

    def __add__(self, other: "SymTensor3") -> "SymTensor3":
        return SymTensor3(self.voigt + other.voigt)

    def __sub__(self, other: "SymTensor3") -> "SymTensor3":
        return SymTensor3(self.voigt - other.voigt)

    def __mul__(self, scalar: Union[float, int]) -> "SymTensor3":
        return SymTensor3(self.voigt * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "SymTensor3":
        return SymTensor3(-self.voigt)

    def __repr__(self) -> str:
        return f"SymTensor3({np.array2string(self.voigt, precision=6)})"


def as_tensor3(value: ArrayLike, name: str = "tensor") -> Tensor3:
    """Coerce to a float 3x3 array."""
    array = np.array(value, dtype=float)
    if array.shape != (3, 3):
        raise ValueError(f"{name} must be 3x3, got shape {array.shape}")
    return array
