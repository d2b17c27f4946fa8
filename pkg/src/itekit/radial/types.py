from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DtnModeSample:
    """D-N map of one mode at one spectral parameter.

    ``matrix`` is ``c x c`` in the boundary-orthonormal basis, component order
    (outer, inner); it is ``None`` when ``is_pole`` is set."""

    lam: complex | float
    l: int
    matrix: np.ndarray | None
    pole_distance: float
    is_pole: bool

    @property
    def scalar(self) -> complex | float:
        if self.matrix is None:
            raise ValueError(f"no D-N value at a pole (l={self.l}, lambda={self.lam})")
        return self.matrix[0, 0]

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "l": self.l,
            "matrix": None if self.matrix is None else self.matrix.tolist(),
            "pole_distance": self.pole_distance,
            "is_pole": self.is_pole,
        }


@dataclass(frozen=True)
class DirichletEigenRecord:
    lambda0: float
    l: int
    boundary_data: np.ndarray  # outward normal derivative of the normalized eigenfunction
    weighted_data: np.ndarray  # boundary_data * f(boundary)^{(d-1)/2}
    mult_geometric: int
    index: int  # j, counting from 1 within the mode

    def to_dict(self) -> dict:
        return {
            "lambda0": self.lambda0,
            "l": self.l,
            "j": self.index,
            "mult": self.mult_geometric,
            "boundary_data": [float(x) for x in self.boundary_data],
            "weighted_data": [float(x) for x in self.weighted_data],
        }

    @classmethod
    def from_dict(cls, row: dict) -> DirichletEigenRecord:
        return cls(
            float(row["lambda0"]),
            int(row["l"]),
            np.array(row["boundary_data"], dtype=float),
            np.array(row["weighted_data"], dtype=float),
            int(row["mult"]),
            int(row["j"]),
        )


@dataclass(frozen=True)
class ResidueMatrix:
    """Residue against ``1/(lambda0 - lambda)``: ``-w w^T``, rank one, negative semidefinite."""

    lambda0: float
    l: int
    matrix: np.ndarray
