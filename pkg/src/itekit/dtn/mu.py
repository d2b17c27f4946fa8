"""Eigenvalue curves of the auxiliary operator and the negative count ``N_-``.

On mode ``l`` the auxiliary operator is ``gamma W^(1/2) (Lambda_1 - Lambda_2 - zeta) W^(1/2)``
with ``W = diag((1 + kappa_l / f(b)^2)^((1 + s)/2))`` over boundary components.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from itekit.common import parallel_map
from itekit.errors import EllipticRegimeViolation, PoleProximity, TruncationUncertified
from itekit.logger import get_logger
from itekit.manifold import ManifoldPair, kappa, multiplicity
from itekit.settings import DEFAULT_TOLERANCES, Tolerances
from itekit.symbolic import tail_terms

from .difference import difference_mode, difference_sweep

log = get_logger(__name__)


def mode_weights(pair: ManifoldPair, l: int) -> np.ndarray:
    """Diagonal of ``W`` on mode ``l``."""

    k = kappa(l, pair.dimension)
    xi2 = k / pair.m1.boundary_warp**2
    return (1.0 + xi2) ** ((1 + pair.s) / 2)


def weighted(pair: ManifoldPair, diff: np.ndarray, l: int, scale: float = 1.0) -> np.ndarray:
    root = np.sqrt(scale * mode_weights(pair, l))
    sym = (diff + np.swapaxes(diff, -1, -2)) / 2
    return pair.gamma * root[:, None] * sym * root[None, :]


@dataclass(frozen=True)
class MuSample:
    lam: float
    l: int
    values: np.ndarray  # ascending
    is_pole: bool = False

    @property
    def negatives(self) -> int:
        return int(np.sum(self.values < 0))


def mu_mode(
    pair: ManifoldPair,
    lam: float,
    l: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    scale: float = 1.0,
) -> MuSample:
    """Eigenvalues of the weighted difference on mode ``l``.

    At a pole of either manifold the values are NaN and ``is_pole`` is set.

    Example:
        ``l = 0`` with ``f(b) = 1`` and ``s = 1``: ``mu = gamma (m1 - m2 - zeta)``"""

    sample = difference_mode(pair, lam, l, tol)
    if sample.at_pole:
        return MuSample(lam, l, np.full(pair.components, np.nan), True)
    values = np.linalg.eigvalsh(weighted(pair, np.real(sample.diff_matrix), l, scale))
    return MuSample(lam, l, values)


@dataclass(frozen=True)
class MuCurves:
    """``mu`` values along a grid, columns matched between neighbours."""

    lambdas: np.ndarray
    l: int
    values: np.ndarray  # (k, c), NaN at poles
    is_pole: np.ndarray

    def max_jump(self) -> float:
        """Largest change between neighbours that are both off poles."""

        steps = np.abs(np.diff(self.values, axis=0))
        ok = ~(self.is_pole[1:] | self.is_pole[:-1])
        return float(np.max(steps[ok])) if np.any(ok) else 0.0


def mu_curves(
    pair: ManifoldPair,
    l: int,
    lambdas: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> MuCurves:
    """``mu`` along ``lambdas`` with nearest-neighbour matching of the columns."""

    sweep = difference_sweep(pair, l, lambdas, tol)
    is_pole = sweep.pole_flags.any(axis=1)
    c = pair.components
    values = np.full((len(sweep.lambdas), c), np.nan)
    previous = None
    for i, matrix in enumerate(sweep.matrices):
        if is_pole[i]:
            previous = None
            continue
        current = np.linalg.eigvalsh(weighted(pair, matrix, l))
        if previous is not None and c == 2:
            swapped = current[::-1]
            if np.sum(np.abs(swapped - previous)) < np.sum(np.abs(current - previous)):
                current = swapped
        values[i] = current
        previous = current
    return MuCurves(sweep.lambdas, l, values, is_pole)


@dataclass(frozen=True)
class NegativeCount:
    """``N_-(lambda)`` with its truncation certificate ``l_star``."""

    lam: float
    count: int
    l_star: int
    per_mode: tuple[tuple[int, int, int], ...] = field(default=())  # (l, negatives, mult)

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "count": self.count,
            "l_star": self.l_star,
            "per_mode": [list(row) for row in self.per_mode],
        }


def certified(pair: ManifoldPair, lam: float, l: int, sample: MuSample, tol: Tolerances) -> bool:
    """Whether the symbol guarantees ``mu > 0`` for every mode ``>= l``.

    Requires the elliptic regime, a leading term of the right sign dominating
    the next one by ``tail_safety`` on every component, and positive values."""

    if sample.is_pole or np.any(sample.values <= 0):
        return False
    for component in range(pair.components):
        try:
            lead, following = tail_terms(pair, lam, l, component)
        except EllipticRegimeViolation:
            return False
        if pair.gamma * lead <= 0 or abs(lead) < tol.tail_safety * abs(following):
            return False
    return True


def count_negative(
    pair: ManifoldPair,
    lam: float,
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    threads: int = 1,
    scale: float = 1.0,
) -> NegativeCount:
    """Number of negative ``mu`` over all modes, counted with spherical multiplicity.

    Modes are scanned from ``l = 0`` until the symbol certifies the tail.

    Args:
        pair (ManifoldPair): validated pair
        lam (float): spectral parameter, > 0 and off poles
        l_max (int): last mode tried
        threads (int): modes evaluated concurrently
        scale (float): positive rescaling of ``W``"""

    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")

    rows = []
    total = 0
    batch = max(1, threads)
    for start in range(0, l_max + 1, batch):
        modes = list(range(start, min(start + batch, l_max + 1)))
        samples = parallel_map(lambda l: mu_mode(pair, lam, l, tol, scale), modes, threads)
        for l, sample in zip(modes, samples):
            if sample.is_pole:
                raise PoleProximity(f"lambda={lam} is a pole on mode {l}", l=l, lam=lam)
            if certified(pair, lam, l, sample, tol):
                log.debug(f"N_-({lam}) = {total}, certified from l={l}")
                return NegativeCount(lam, total, l, tuple(rows))
            mult = multiplicity(l, pair.dimension)
            rows.append((l, sample.negatives, mult))
            total += sample.negatives * mult

    raise TruncationUncertified(
        f"no certified tail up to l_max={l_max} at lambda={lam}",
        lam=lam,
        l_max=l_max,
        count_so_far=total,
    )


def negative_counts(
    pair: ManifoldPair,
    lambdas,
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[NegativeCount]:
    """``count_negative`` over a grid, one vectorized sweep per mode.

    Each point stops counting at its own certified mode; the sweep goes on
    until every point is certified."""

    grid = np.atleast_1d(np.asarray(lambdas, dtype=float))
    if np.any(grid <= 0):
        raise ValueError(f"lambda must be positive, got {float(grid.min())}")

    totals = np.zeros(len(grid), dtype=int)
    rows: list[list[tuple[int, int, int]]] = [[] for _ in grid]
    l_star = np.full(len(grid), -1)
    for l in range(l_max + 1):
        open_ = np.flatnonzero(l_star < 0)
        if len(open_) == 0:
            break
        curves = mu_curves(pair, l, grid[open_], tol)
        mult = multiplicity(l, pair.dimension)
        for k, i in enumerate(open_):
            if curves.is_pole[k]:
                raise PoleProximity(f"lambda={grid[i]} is a pole on mode {l}", l=l, lam=float(grid[i]))
            sample = MuSample(float(grid[i]), l, np.sort(curves.values[k]))
            if certified(pair, sample.lam, l, sample, tol):
                l_star[i] = l
                continue
            rows[i].append((l, sample.negatives, mult))
            totals[i] += sample.negatives * mult

    missing = np.flatnonzero(l_star < 0)
    if len(missing):
        raise TruncationUncertified(
            f"no certified tail up to l_max={l_max} at {len(missing)} grid points",
            lambdas=[float(grid[i]) for i in missing],
            l_max=l_max,
        )
    log.debug(f"N_- on {len(grid)} points, certified by l={int(l_star.max())}")
    return [NegativeCount(float(x), int(totals[i]), int(l_star[i]), tuple(rows[i])) for i, x in enumerate(grid)]
