"""Weyl constants and Dirichlet counting functions of one manifold."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma as gamma_fn

from itekit.common import parallel_map
from itekit.errors import TruncationUncertified
from itekit.logger import get_logger
from itekit.manifold import WarpedManifold, multiplicity
from itekit.radial import phase_counts
from itekit.settings import DEFAULT_TOLERANCES, Tolerances

log = get_logger(__name__)

QUAD_REL = 1e-10


def unit_ball_volume(d: int) -> float:
    return float(np.pi ** (d / 2) / gamma_fn(d / 2 + 1))


def sphere_area(d: int) -> float:
    """Area of the unit sphere ``S^(d-1)``."""

    return float(2 * np.pi ** (d / 2) / gamma_fn(d / 2))


def _phase_space(m: WarpedManifold, warp_power: int) -> float:
    d = m.dimension
    value, _ = quad(
        lambda r: m.n(r) ** (d / 2) * m.f(r) ** warp_power,
        m.r_start,
        m.r_outer,
        epsrel=QUAD_REL,
        epsabs=0.0,
        limit=200,
    )
    return (2 * np.pi) ** (-d) * unit_ball_volume(d) * sphere_area(d) * value


def weyl_constant(m: WarpedManifold) -> float:
    """``V = (2 pi)^-d omega_d  int_M n^(d/2) dV``.

    Example:
        unit disk with ``n = 1`` gives ``1/4``"""

    return _phase_space(m, m.dimension - 1)


def weyl_constant_literal(m: WarpedManifold) -> float:
    """Variant that also weights the phase-space volume by ``sqrt(det g)``.

    Reported next to ``weyl_constant``; the counting function follows the latter."""

    return _phase_space(m, 2 * (m.dimension - 1))


def dirichlet_counts(
    m: WarpedManifold,
    lambdas: np.ndarray,
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    threads: int = 1,
) -> np.ndarray:
    """``N(lambda)`` on a grid, counted with spherical multiplicity.

    Modes are added until one has no eigenvalue below ``max(lambdas)``; mode
    floors increase with ``l``, so later modes add nothing."""

    lambdas = np.atleast_1d(np.asarray(lambdas, dtype=float))
    total = np.zeros(len(lambdas), dtype=int)
    previous = None
    batch = max(1, threads)
    for start in range(0, l_max + 1, batch):
        modes = list(range(start, min(start + batch, l_max + 1)))
        found = parallel_map(lambda l: phase_counts(m, l, lambdas, tol), modes, threads)
        for l, counts in zip(modes, found):
            if previous is not None and np.any(counts > previous):
                log.warning(f"mode {l} counts exceed mode {l - 1}; floors not monotone")
            if not np.any(counts):
                log.debug(f"{m.name or 'manifold'}: counting closed at mode {l}")
                return total
            total += counts * multiplicity(l, m.dimension)
            previous = counts

    raise TruncationUncertified(
        f"mode {l_max} still has eigenvalues below {float(np.max(lambdas))}",
        l_max=l_max,
        lam=float(np.max(lambdas)),
    )


def dirichlet_counting(
    m: WarpedManifold,
    lam: float,
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    threads: int = 1,
) -> int:
    """``N(lambda) = #{ j : lambda_j <= lambda }`` with multiplicity."""

    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    return int(dirichlet_counts(m, [lam], l_max, tol, threads=threads)[0])


@dataclass(frozen=True)
class WeylFit:
    """``N(lambda) / lambda^(d/2)`` against ``V`` with the fitted constant ``C``."""

    constant: float
    literal: float
    lambdas: np.ndarray
    counts: np.ndarray
    ratios: np.ndarray
    c_fit: float

    def to_dict(self) -> dict:
        return {
            "V": self.constant,
            "V_literal": self.literal,
            "C": self.c_fit,
            "rows": [
                {"lambda": float(x), "N": int(n), "ratio": float(q)}
                for x, n, q in zip(self.lambdas, self.counts, self.ratios)
            ],
        }


def weyl_fit(
    m: WarpedManifold,
    lambdas: np.ndarray,
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    threads: int = 1,
) -> WeylFit:
    """Smallest ``C`` with ``|N(lambda)/lambda^(d/2) - V| <= C lambda^(-1/2)``
    over the top decade of ``lambdas``."""

    lambdas = np.sort(np.asarray(lambdas, dtype=float))
    counts = dirichlet_counts(m, lambdas, l_max, tol, threads=threads)
    constant = weyl_constant(m)
    ratios = counts / lambdas ** (m.dimension / 2)
    top = lambdas >= lambdas[-1] / 10
    c_fit = float(np.max(np.abs(ratios[top] - constant) * np.sqrt(lambdas[top])))
    return WeylFit(constant, weyl_constant_literal(m), lambdas, counts, ratios, c_fit)
