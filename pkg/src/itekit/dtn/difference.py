from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from itekit.logger import get_logger
from itekit.manifold import ManifoldPair, WarpedManifold
from itekit.radial import (
    DtnSweep,
    dtn_mode,
    dtn_sweep,
    eigen_record,
    nearest_pole,
    regular_part,
    residue_mode,
)
from itekit.settings import DEFAULT_TOLERANCES, Tolerances

log = get_logger(__name__)


@dataclass(frozen=True)
class DifferenceSample:
    """``Lambda_1 - Lambda_2 - zeta`` on one mode.

    Off poles ``diff_matrix`` is the plain difference. At a pole it is the
    regular part ``H1 - H2 - zeta`` and ``residue`` holds ``Q1 - Q2``."""

    lam: complex | float
    l: int
    diff_matrix: np.ndarray
    pole_flags: tuple[bool, bool]
    residue: np.ndarray | None = None
    lambda0: float | None = None

    @property
    def at_pole(self) -> bool:
        return any(self.pole_flags)

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "l": self.l,
            "diff_matrix": self.diff_matrix.tolist(),
            "pole_flags": list(self.pole_flags),
            "residue": None if self.residue is None else self.residue.tolist(),
        }


def zeta_matrix(pair: ManifoldPair) -> np.ndarray:
    return np.diag(pair.zeta_values)


def _pole_parts(m: WarpedManifold, lam: float, l: int, tol: Tolerances) -> tuple[float, np.ndarray, np.ndarray]:
    lambda0 = nearest_pole(m, l, lam, tol)
    residue = residue_mode(m, eigen_record(m, l, lambda0, tol)).matrix
    return lambda0, residue, regular_part(m, lambda0, l, tol)


def difference_mode(
    pair: ManifoldPair,
    lam: complex | float,
    l: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> DifferenceSample:
    """Difference of the two D-N maps on mode ``l``, minus ``zeta``.

    Poles are flagged, not errors: a manifold with a pole at ``lam`` contributes
    its Laurent regular part and its residue."""

    samples = [dtn_mode(m, lam, l, tol) for m in (pair.m1, pair.m2)]
    flags = tuple(s.is_pole for s in samples)
    zeta = zeta_matrix(pair)

    if not any(flags):
        return DifferenceSample(lam, l, samples[0].matrix - samples[1].matrix - zeta, flags)

    c = pair.components
    regular = []
    residue = np.zeros((c, c))
    lambda0 = None
    for sign, m, sample in zip((1.0, -1.0), (pair.m1, pair.m2), samples):
        if sample.is_pole:
            lambda0, q, h = _pole_parts(m, float(np.real(lam)), l, tol)
            residue += sign * q
            regular.append(h)
        else:
            regular.append(sample.matrix)
    log.debug(f"mode {l}: regularized difference at lambda={lam} (poles {flags})")
    return DifferenceSample(lam, l, regular[0] - regular[1] - zeta, flags, residue, lambda0)


@dataclass(frozen=True)
class DifferenceSweep:
    lambdas: np.ndarray
    l: int
    matrices: np.ndarray  # (k, c, c), NaN where either manifold has a pole
    pole_flags: np.ndarray  # (k, 2)

    def det(self) -> np.ndarray:
        return np.linalg.det(self.matrices)


def difference_sweep(
    pair: ManifoldPair,
    l: int,
    lambdas: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> DifferenceSweep:
    """``difference_mode`` over a real grid, one vectorized solve per manifold."""

    one: DtnSweep = dtn_sweep(pair.m1, l, lambdas, tol)
    two: DtnSweep = dtn_sweep(pair.m2, l, lambdas, tol)
    matrices = one.matrices - two.matrices - zeta_matrix(pair)[None, :, :]
    return DifferenceSweep(one.lambdas, l, matrices, np.stack([one.is_pole, two.is_pole], axis=1))
