from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from itekit.cache import SpectrumCache
from itekit.dtn import count_negative, pole_catalog
from itekit.errors import VerificationFailure
from itekit.ite import check_alpha, ite_search
from itekit.logger import get_logger
from itekit.manifold import ManifoldPair
from itekit.settings import DEFAULT_TOLERANCES, Tolerances

from .jumps import Decomposition, JumpRecord, decomposition, jump_table
from .volume import weyl_constant, weyl_constant_literal

log = get_logger(__name__)


@dataclass(frozen=True)
class BoundRow:
    lam: float
    n_t: int
    pole_sum: int  # gamma * sum over poles <= lambda of (m1 - m2)
    n_minus_alpha: int

    @property
    def bound_rhs(self) -> int:
        return self.pole_sum - self.n_minus_alpha

    @property
    def slack(self) -> int:
        return self.n_t - self.bound_rhs

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "N_T": self.n_t,
            "pole_sum": self.pole_sum,
            "N_minus_alpha": self.n_minus_alpha,
            "bound_rhs": self.bound_rhs,
            "slack": self.slack,
        }


@dataclass(frozen=True)
class WeylReport:
    """Lower-bound check of ``N_T`` over a grid, with the Weyl constants of both sides."""

    v1: float
    v2: float
    v1_literal: float
    v2_literal: float
    gamma: int
    alpha: float
    dimension: int
    rows: tuple[BoundRow, ...]
    jumps: tuple[JumpRecord, ...] = field(default=())
    decomposition: Decomposition | None = None

    @property
    def predicted_slope(self) -> float:
        """``gamma (V1 - V2)``, the asymptotic lower bound on ``N_T / lambda^(d/2)``."""

        return self.gamma * (self.v1 - self.v2)

    @property
    def failures(self) -> list[BoundRow]:
        return [row for row in self.rows if row.slack < 0]

    def fit(self) -> tuple[float, float]:
        """``(A, C)`` of ``N_T / lambda^(d/2) ~ A + C lambda^(-1/2)`` over the top decade."""

        lams = np.array([row.lam for row in self.rows], dtype=float)
        ratios = np.array([row.n_t for row in self.rows], dtype=float) / lams ** (self.dimension / 2)
        top = lams >= lams.max() / 10
        if np.sum(top) < 2:
            return float(ratios[-1]), 0.0
        c, a = np.polyfit(lams[top] ** -0.5, ratios[top], 1)
        return float(a), float(c)

    def to_dict(self) -> dict:
        slope, c_fit = self.fit()
        return {
            "V1": self.v1,
            "V2": self.v2,
            "V1_literal": self.v1_literal,
            "V2_literal": self.v2_literal,
            "gamma": self.gamma,
            "alpha": self.alpha,
            "predicted_slope": self.predicted_slope,
            "fit": {"slope": slope, "C": c_fit},
            "rows": [row.to_dict() for row in self.rows],
            "jumps": [j.to_dict() for j in self.jumps],
            "decomposition": None if self.decomposition is None else self.decomposition.to_dict(),
        }


def verify_lower_bound(
    pair: ManifoldPair,
    alpha: float,
    lambda_grid: np.ndarray,
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    cache: SpectrumCache | None = None,
    threads: int = 1,
    with_jumps: bool = False,
    with_decomposition: bool = False,
) -> WeylReport:
    """Check ``N_T(lambda) >= gamma sum_(poles <= lambda) (m1 - m2) - N_-(alpha)`` on a grid.

    A negative slack anywhere raises VerificationFailure carrying the report.

    Args:
        pair (ManifoldPair): validated pair
        alpha (float): admissible lower end, below both first eigenvalues
        lambda_grid: increasing grid in ``(alpha, inf)``
        with_jumps (bool): also measure the ``N_-`` jump at every pole
        with_decomposition (bool): also split ``N_-`` into crossings and pole jumps
            up to the last grid point"""

    check_alpha(pair, alpha, tol)
    grid = np.sort(np.asarray(lambda_grid, dtype=float))
    grid = grid[grid > alpha]
    if len(grid) == 0:
        raise ValueError(f"no grid point above alpha={alpha}")
    top = float(grid[-1])

    records = ite_search(pair, (alpha, top), l_max, tol, cache=cache, threads=threads)
    poles = pole_catalog(pair, (alpha, top), l_max, tol, cache, threads)
    n_minus_alpha = count_negative(pair, alpha, l_max, tol, threads=threads).count

    rows = []
    for lam in grid:
        n_t = sum(r.multiplicity for r in records if r.lam <= lam)
        pole_sum = pair.gamma * sum(e.m1 - e.m2 for e in poles if e.lambda0 <= lam)
        rows.append(BoundRow(float(lam), n_t, pole_sum, n_minus_alpha))

    jumps = tuple(jump_table(pair, poles, l_max, tol)) if with_jumps else ()

    split = None
    if with_decomposition:
        split = decomposition(pair, alpha, top, l_max, records, poles, tol, threads=threads)
        if not (split.balanced and split.bounded):
            raise VerificationFailure("N_- decomposition does not close", **split.to_dict())

    report = WeylReport(
        weyl_constant(pair.m1),
        weyl_constant(pair.m2),
        weyl_constant_literal(pair.m1),
        weyl_constant_literal(pair.m2),
        pair.gamma,
        alpha,
        pair.dimension,
        tuple(rows),
        jumps,
        split,
    )
    if report.failures:
        raise VerificationFailure(
            f"lower bound fails at {len(report.failures)} grid points",
            failures=[row.to_dict() for row in report.failures],
            report=report.to_dict(),
        )
    log.info(f"lower bound holds on {len(rows)} grid points up to {top}")
    return report
