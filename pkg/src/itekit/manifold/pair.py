"""Pairs of manifolds sharing a boundary, and the assumption checks on them."""

from __future__ import annotations

import typing
from dataclasses import dataclass
from enum import Enum

import sympy as sp

from itekit.errors import AmbiguousCase, AssumptionViolation, MismatchedBoundary
from itekit.logger import get_logger

from .geometry import WarpedManifold, parse_number
from .modes import kappa

log = get_logger(__name__)


class Case(Enum):
    """Which assumption case orients the pair."""

    A21 = "A21"  # jets of f agree to order 2, n1 != n2 on the boundary
    A22 = "A22"  # jets of f agree to order 3, n1 == n2, normal derivatives differ
    ZETA = "ZETA"  # nonzero boundary parameter of one sign

    @property
    def order(self) -> int:
        """Weight exponent ``s`` of the auxiliary operator."""

        return {Case.A21: 1, Case.A22: 2, Case.ZETA: 0}[self]


@dataclass(frozen=True)
class ManifoldPair:
    m1: WarpedManifold
    m2: WarpedManifold
    zeta: tuple[sp.Expr, ...]
    case: Case
    gamma: int
    base_case: Case

    @property
    def components(self) -> int:
        return self.m1.components

    @property
    def dimension(self) -> int:
        return self.m1.dimension

    @property
    def zeta_values(self) -> tuple[float, ...]:
        return tuple(float(z) for z in self.zeta)

    @property
    def s(self) -> int:
        return self.case.order

    def swapped(self) -> ManifoldPair:
        return validate_pair(self.m2, self.m1, self.zeta)

    def to_dict(self) -> dict:
        return {
            "m1": self.m1.to_dict(),
            "m2": self.m2.to_dict(),
            "zeta": [str(z) for z in self.zeta],
            "case": self.case.value,
            "base_case": self.base_case.value,
            "gamma": self.gamma,
        }


def _sign(value: sp.Expr) -> int:
    value = sp.expand(value)
    if value == 0:
        return 0
    return 1 if bool(value > 0) else -1


def _check_boundary(m1: WarpedManifold, m2: WarpedManifold) -> None:
    if m1.dimension != m2.dimension:
        raise MismatchedBoundary(
            "dimensions differ", m1=m1.dimension, m2=m2.dimension
        )
    if type(m1.domain) is not type(m2.domain) or any(
        sp.expand(a - b) != 0 for a, b in zip(m1.domain.radii, m2.domain.radii)
    ):
        raise MismatchedBoundary(
            "radial domains differ", m1=m1.domain.to_dict(), m2=m2.domain.to_dict()
        )
    for c in range(m1.components):
        if sp.expand(m1.warp_derivative(0, c) - m2.warp_derivative(0, c)) != 0:
            raise MismatchedBoundary("warp values differ on the boundary", component=c)


def matched_warp_order(m1: WarpedManifold, m2: WarpedManifold, limit: int = 6) -> int:
    """Largest ``k <= limit`` such that warp derivatives agree up to order ``k`` on every component."""

    for k in range(1, limit + 1):
        for c in range(m1.components):
            if sp.expand(m1.warp_derivative(k, c) - m2.warp_derivative(k, c)) != 0:
                return k - 1
    return limit


def detect_case(m1: WarpedManifold, m2: WarpedManifold) -> tuple[Case, int]:
    """A-2 case and its sign ``gamma_0`` from exact boundary jets.

    Raises AssumptionViolation when neither case holds or the sign changes
    between boundary components."""

    order = matched_warp_order(m1, m2)
    components = range(m1.components)
    index_gap = [m2.index_derivative(0, c) - m1.index_derivative(0, c) for c in components]

    if all(sp.expand(g) != 0 for g in index_gap):
        if order < 2:
            raise AssumptionViolation(
                "n1 != n2 on the boundary but warp jets agree only to order "
                f"{order} (need 2)",
                assumption="A-2-1",
            )
        signs = {_sign(g) for g in index_gap}
        if len(signs) != 1:
            raise AssumptionViolation(
                "sgn(n2 - n1) changes between boundary components",
                assumption="A-3",
            )
        return Case.A21, signs.pop()

    if all(sp.expand(g) == 0 for g in index_gap):
        normal_gap = [
            m1.normal_index_derivative(c) - m2.normal_index_derivative(c)
            for c in components
        ]
        if not all(sp.expand(g) != 0 for g in normal_gap):
            raise AssumptionViolation(
                "n1 == n2 on the boundary and their normal derivatives agree somewhere",
                assumption="A-2",
            )
        if order < 3:
            raise AssumptionViolation(
                "n1 == n2 on the boundary but warp jets agree only to order "
                f"{order} (need 3)",
                assumption="A-2-2",
            )
        signs = {_sign(g) for g in normal_gap}
        if len(signs) != 1:
            raise AssumptionViolation(
                "sgn(dn1/dnu - dn2/dnu) changes between boundary components",
                assumption="A-3",
            )
        return Case.A22, signs.pop()

    raise AssumptionViolation(
        "n1 - n2 vanishes on some boundary components but not on others",
        assumption="A-2",
    )


def validate_pair(
    m1: WarpedManifold,
    m2: WarpedManifold,
    zeta: typing.Sequence[typing.Any] | None = None,
    case: str | Case | None = None,
) -> ManifoldPair:
    """Validate a pair and fix its case and sign.

    Args:
        m1 (WarpedManifold): first manifold
        m2 (WarpedManifold): second manifold
        zeta: one constant per boundary component (default all zero)
        case: optional requested case, checked against the detected one"""

    _check_boundary(m1, m2)

    zeta = tuple(parse_number(z) for z in (zeta or [0] * m1.components))
    if len(zeta) != m1.components:
        raise MismatchedBoundary(
            f"need one zeta per boundary component ({m1.components}), got {len(zeta)}"
        )

    base_case, gamma0 = detect_case(m1, m2)
    requested = Case(case) if isinstance(case, str) and case else case

    zeta_signs = {_sign(z) for z in zeta}
    if zeta_signs == {0}:
        if requested is Case.ZETA:
            raise AmbiguousCase("case ZETA requested but zeta vanishes identically")
        if requested is not None and requested is not base_case:
            raise AssumptionViolation(
                f"requested case {requested.value} but the jets give {base_case.value}",
                assumption="A-2",
            )
        pair = ManifoldPair(m1, m2, zeta, base_case, gamma0, base_case)
    else:
        if 0 in zeta_signs or len(zeta_signs) != 1:
            raise AssumptionViolation(
                "zeta must be nonzero with one sign on the whole boundary",
                assumption="A-3",
                zeta=[str(z) for z in zeta],
            )
        if requested in (Case.A21, Case.A22):
            raise AmbiguousCase(
                f"case {requested.value} requested with zeta != 0; zeta fixes gamma",
            )
        pair = ManifoldPair(m1, m2, zeta, Case.ZETA, -zeta_signs.pop(), base_case)

    log.debug(f"validated pair: case={pair.case.value} gamma={pair.gamma}")
    return pair


def boundary_wavenumber(pair: ManifoldPair | WarpedManifold, l: int, component: int = 0) -> float:
    """``|xi'| = sqrt(kappa_l) / f(r_boundary)`` on one boundary component."""

    m = pair.m1 if isinstance(pair, ManifoldPair) else pair
    if not 0 <= component < m.components:
        raise IndexError(f"component {component} out of range for {m.components}")
    return float(kappa(l, m.dimension)) ** 0.5 / float(m.boundary_warp[component])
