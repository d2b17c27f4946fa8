"""Mode-wise D-N maps, Dirichlet spectra and residues of one manifold."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from itekit.errors import (
    BracketExhaustion,
    NotAnEigenvalue,
    PoleProximity,
    RootRefinementFailure,
)
from itekit.logger import get_logger
from itekit.manifold import Cap, WarpedManifold, multiplicity
from itekit.settings import DEFAULT_TOLERANCES, Tolerances

from .prufer import PhaseEnd, integrate_phase, integrate_riccati
from .types import DirichletEigenRecord, DtnModeSample, ResidueMatrix

log = get_logger(__name__)

MAX_GRID_REFINEMENTS = 6
NEWTON_STEPS = 12


@dataclass(frozen=True)
class DtnSweep:
    """Vectorized D-N evaluation of one mode; matrices at poles are NaN."""

    lambdas: np.ndarray
    l: int
    matrices: np.ndarray  # (k, c, c)
    pole_distance: np.ndarray
    is_pole: np.ndarray

    def sample(self, i: int) -> DtnModeSample:
        matrix = None if self.is_pole[i] else self.matrices[i]
        return DtnModeSample(
            float(self.lambdas[i]), self.l, matrix, float(self.pole_distance[i]), bool(self.is_pole[i])
        )

    def __len__(self) -> int:
        return self.lambdas.size


def _is_cap(m: WarpedManifold) -> bool:
    return isinstance(m.domain, Cap)


def _p(m: WarpedManifold, r: float) -> float:
    return float(m.f(r)) ** (m.dimension - 1)


def _cot(x: np.ndarray) -> np.ndarray:
    return np.cos(x) / np.sin(x)


def _assemble(
    m: WarpedManifold,
    theta_b: np.ndarray,
    log_rho: np.ndarray,
    theta_a: np.ndarray | None,
    parity: float = 1.0,
) -> np.ndarray:
    """D-N matrices from end phases, in the orthonormal basis.

    ``parity`` replaces ``sin(theta_b)`` by ``parity * sin(theta_b)``, which
    lets callers pass phases measured from a multiple of pi."""

    k = theta_b.size
    p_b = _p(m, m.r_outer)
    with np.errstate(divide="ignore", invalid="ignore"):
        oo = _cot(theta_b) / p_b
        if theta_a is None:
            return oo.reshape(k, 1, 1)
        p_a = _p(m, m.r_start)
        ii = -_cot(theta_a) / p_a
        io = -np.exp(-log_rho) / (np.sqrt(p_a * p_b) * parity * np.sin(theta_b))
    out = np.empty((k, 2, 2))
    out[:, 0, 0] = oo
    out[:, 1, 1] = ii
    out[:, 0, 1] = io
    out[:, 1, 0] = io
    return out


def _newton_distance(end: PhaseEnd) -> tuple[np.ndarray, np.ndarray]:
    """Nearest phase level ``j >= 1`` and the Newton distance to it in ``lambda``."""

    j = np.maximum(1, np.rint(end.theta / np.pi)).astype(int)
    return j, np.abs(end.theta - j * np.pi) / end.weight


def dtn_sweep(
    m: WarpedManifold,
    l: int,
    lambdas: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> DtnSweep:
    """D-N matrices of mode ``l`` at many real ``lambdas`` in one ODE solve.

    Args:
        m (WarpedManifold): manifold
        l (int): mode
        lambdas: real spectral parameters
        tol (Tolerances): tolerances"""

    lambdas = np.atleast_1d(np.asarray(lambdas, dtype=float))
    fwd = integrate_phase(m, l, lambdas, tol, weight=True)
    bwd = None if _is_cap(m) else integrate_phase(m, l, lambdas, tol, weight=False, backward=True)
    matrices = _assemble(m, fwd.theta, fwd.log_rho, None if bwd is None else bwd.theta)

    _, distance = _newton_distance(fwd)
    window = np.array([tol.pole_window(x) for x in lambdas])
    is_pole = distance <= window
    matrices[is_pole] = np.nan
    log.debug(f"dtn sweep l={l}: {lambdas.size} points, {int(is_pole.sum())} at poles")
    return DtnSweep(lambdas, l, matrices, distance, is_pole)


def _dtn_off_axis(m: WarpedManifold, lam: complex, l: int, tol: Tolerances) -> np.ndarray:
    p_b = _p(m, m.r_outer)
    if _is_cap(m):
        u_b, _ = integrate_riccati(m, l, lam, tol)
        return np.array([[u_b / p_b]])
    p_a = _p(m, m.r_start)
    s_b, big_l = integrate_riccati(m, l, lam, tol)
    s_a, _ = integrate_riccati(m, l, lam, tol, backward=True)
    io = -1.0 / (np.sqrt(p_a * p_b) * s_b * np.exp(big_l))
    return np.array([[1.0 / (p_b * s_b), io], [io, -1.0 / (p_a * s_a)]])


def dtn_mode(
    m: WarpedManifold,
    lam: complex | float,
    l: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    strict: bool = False,
) -> DtnModeSample:
    """D-N map of mode ``l`` at ``lam``.

    Real ``lam`` goes through the Prüfer phase, complex ``lam`` through the
    Riccati form. Within the pole window the sample is flagged and carries no
    matrix; with ``strict`` a PoleProximity error is raised instead.

    Example:
        >>> dtn_mode(unit_disk, 0.0, 2).scalar
        2.0"""

    lam = complex(lam)
    if lam.imag == 0.0:
        sample = dtn_sweep(m, l, [lam.real], tol).sample(0)
    else:
        end = integrate_phase(m, l, [lam.real], tol, weight=True)
        _, distance = _newton_distance(end)
        distance = float(np.hypot(distance[0], lam.imag))
        is_pole = distance <= tol.pole_window(lam)
        matrix = None if is_pole else _dtn_off_axis(m, lam, l, tol)
        sample = DtnModeSample(lam, l, matrix, distance, is_pole)

    if strict and sample.is_pole:
        raise PoleProximity(
            f"lambda={lam} is within {sample.pole_distance:.3e} of a mode-{l} Dirichlet eigenvalue",
            l=l,
            distance=sample.pole_distance,
        )
    return sample


def phase_count(
    m: WarpedManifold,
    l: int,
    lam: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> int:
    """Number of mode-``l`` Dirichlet eigenvalues ``<= lam`` from the end phase."""

    if lam <= 0:
        return 0
    end = integrate_phase(m, l, [lam * (1 + tol.root_rel)], tol, weight=False)
    return int(np.floor(end.theta[0] / np.pi))


def phase_counts(
    m: WarpedManifold,
    l: int,
    lambdas: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """``phase_count`` at many parameters in one solve."""

    lambdas = np.atleast_1d(np.asarray(lambdas, dtype=float))
    end = integrate_phase(m, l, np.maximum(lambdas, 0.0) * (1 + tol.root_rel), tol, weight=False)
    return np.where(lambdas > 0, np.floor(end.theta / np.pi), 0).astype(int)


def _record(m: WarpedManifold, l: int, end: PhaseEnd, i: int, j: int) -> DirichletEigenRecord:
    theta, log_rho, weight = end.theta[i], end.log_rho[i], end.weight[i]
    p_b = _p(m, m.r_outer)
    data = [np.cos(theta) / (p_b * np.sqrt(weight))]
    scale = [np.sqrt(p_b)]
    if not _is_cap(m):
        p_a = _p(m, m.r_start)
        data.append(-np.exp(-log_rho) / (p_a * np.sqrt(weight)))
        scale.append(np.sqrt(p_a))
    data = np.array(data)

    lead = data[np.flatnonzero(np.abs(data) > 1e-12 * np.max(np.abs(data)))[0]]
    if lead < 0:
        data = -data
    return DirichletEigenRecord(
        float(end.lambdas[i]),
        l,
        data,
        data * np.array(scale),
        multiplicity(l, m.dimension),
        j,
    )


def _polish(m: WarpedManifold, l: int, roots: np.ndarray, levels: np.ndarray, tol: Tolerances) -> PhaseEnd:
    """Vectorized Newton polish of eigenvalues on the phase levels ``levels * pi``."""

    for _ in range(NEWTON_STEPS):
        end = integrate_phase(m, l, roots, tol, weight=True)
        step = (end.theta - levels * np.pi) / end.weight
        roots = roots - step
        if np.all(np.abs(step) <= 1e-3 * tol.root_rel * np.maximum(1.0, roots)):
            return integrate_phase(m, l, roots, tol, weight=True)
    raise RootRefinementFailure(
        f"Newton polish did not settle for mode {l}",
        l=l,
        step=float(np.max(np.abs(step))),
    )


def dirichlet_spectrum_mode(
    m: WarpedManifold,
    l: int,
    lambda_max: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[DirichletEigenRecord]:
    """All mode-``l`` Dirichlet eigenvalues in ``(0, lambda_max]``.

    Eigenvalues are the parameters where the end phase crosses ``j*pi``. A
    parameter grid brackets every crossing, brentq refines it and a Newton
    step on ``d theta/d lam = J`` polishes all of them together.

    Args:
        m (WarpedManifold): manifold
        l (int): mode
        lambda_max (float): upper end, > 0
        tol (Tolerances): tolerances"""

    if lambda_max <= 0:
        raise ValueError(f"lambda_max must be positive, got {lambda_max}")

    top = lambda_max * (1 + tol.root_rel)
    count = phase_count(m, l, lambda_max, tol)
    if count == 0:
        return []

    nodes = max(16, 4 * count)
    for _ in range(MAX_GRID_REFINEMENTS + 1):
        grid = np.linspace(0.0, top, nodes + 1)
        theta = integrate_phase(m, l, grid, tol, weight=False).theta
        if np.all(np.diff(theta) > 0) and theta[-1] >= count * np.pi:
            break
        log.warning(f"mode {l}: non-monotone phase on {nodes} cells, refining")
        nodes *= 2
    else:
        raise BracketExhaustion(
            f"could not bracket the mode-{l} spectrum below {lambda_max}",
            l=l,
            cells=nodes,
        )

    def phase_gap(x: float, level: int) -> float:
        return float(integrate_phase(m, l, [x], tol, weight=False).theta[0] - level * np.pi)

    levels = np.arange(1, count + 1)
    roots = np.empty(count)
    for i, level in enumerate(levels):
        hi = int(np.searchsorted(theta, level * np.pi))
        lo_x, hi_x = grid[max(hi - 1, 0)], grid[min(hi, nodes)]
        roots[i] = brentq(
            phase_gap, lo_x, hi_x, args=(int(level),), xtol=1e-3 * tol.root_rel, rtol=tol.root_rel
        )

    end = _polish(m, l, roots, levels, tol)
    records = [_record(m, l, end, i, int(level)) for i, level in enumerate(levels)]
    log.debug(f"mode {l}: {len(records)} Dirichlet eigenvalues <= {lambda_max}")
    return [r for r in records if r.lambda0 <= top]


def eigen_boundary_data(
    m: WarpedManifold,
    l: int,
    lambda0: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """Normal derivative of the normalized eigenfunction, per component.

    Raises NotAnEigenvalue when ``lambda0`` is farther than the root tolerance
    from a mode-``l`` eigenvalue."""

    return eigen_record(m, l, lambda0, tol).boundary_data


def eigen_record(
    m: WarpedManifold,
    l: int,
    lambda0: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> DirichletEigenRecord:
    end = integrate_phase(m, l, [lambda0], tol, weight=True)
    j, distance = _newton_distance(end)
    if distance[0] > 10 * tol.root_rel * max(1.0, abs(lambda0)):
        raise NotAnEigenvalue(
            f"{lambda0} is not a mode-{l} Dirichlet eigenvalue",
            l=l,
            distance=float(distance[0]),
        )
    return _record(m, l, end, 0, int(j[0]))


def residue_mode(m: WarpedManifold, rec: DirichletEigenRecord) -> ResidueMatrix:
    """``-w w^T`` from the weighted boundary data of ``rec``."""

    w = rec.weighted_data
    return ResidueMatrix(rec.lambda0, rec.l, -np.outer(w, w))


def nearest_pole(
    m: WarpedManifold,
    l: int,
    lam: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """The mode-``l`` Dirichlet eigenvalue whose phase level is closest to ``lam``."""

    end = integrate_phase(m, l, [lam], tol, weight=True)
    j, _ = _newton_distance(end)
    return float(_polish(m, l, np.array([float(lam)]), j, tol).lambdas[0])


def regular_part(
    m: WarpedManifold,
    lambda0: float,
    l: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """Regular part ``H(lambda0)`` of the mode-``l`` D-N map at one of its poles.

    The even part ``A(h) = (M(lambda0 + h) + M(lambda0 - h)) / 2`` has no pole
    term; ``(4 A(h/2) - A(h)) / 3`` removes its ``h^2`` term. Phases are
    measured from the phase at ``lambda0`` in the same solve, so the subtraction
    sees the pole of the discretized problem."""

    lambda0 = nearest_pole(m, l, lambda0, tol)
    h = tol.laurent_h(lambda0)
    lams = np.array([lambda0, lambda0 - h, lambda0 + h, lambda0 - h / 2, lambda0 + h / 2])

    fwd = integrate_phase(m, l, lams, tol, weight=False)
    parity = float(np.sign(np.cos(fwd.theta[0])))
    theta_a = None
    if not _is_cap(m):
        bwd = integrate_phase(m, l, lams, tol, weight=False, backward=True)
        theta_a = (bwd.theta - bwd.theta[0])[1:]
    mats = _assemble(m, (fwd.theta - fwd.theta[0])[1:], fwd.log_rho[1:], theta_a, parity)

    even_h = (mats[0] + mats[1]) / 2
    even_half = (mats[2] + mats[3]) / 2
    return (4 * even_half - even_h) / 3


@dataclass(frozen=True)
class Solvability:
    solvable: bool
    pairing: float  # <w, data> on the boundary, orthonormal basis
    normal_data: np.ndarray | None


def solvability(
    m: WarpedManifold,
    l: int,
    lambda0: float,
    data: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> Solvability:
    """Dirichlet problem with boundary values ``data`` at an eigenvalue.

    Solvable iff ``data`` is orthogonal to the eigenfunction's normal data; the
    solution orthogonal to the eigenspace then has normal data ``H(lambda0) data``."""

    data = np.asarray(data, dtype=float)
    rec = eigen_record(m, l, lambda0, tol)
    pairing = float(rec.weighted_data @ data)
    scale = np.linalg.norm(rec.weighted_data) * max(np.linalg.norm(data), 1e-300)
    if abs(pairing) > tol.degeneracy_tol * scale:
        return Solvability(False, pairing, None)
    return Solvability(True, pairing, regular_part(m, rec.lambda0, l, tol) @ data)
