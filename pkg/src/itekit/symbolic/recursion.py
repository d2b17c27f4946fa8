"""Boundary-normal symbol recursion for a warped manifold.

In the inward normal coordinate ``y`` near a boundary sphere, mode functions
satisfy

    -u'' - (d-1) (F'/F) u' + xi^2 (F0/F)^2 u - lam N(y) u = 0

with ``F(y)`` the warp along the normal, ``F0 = F(0)`` and ``xi^2 = kappa / F0^2``.
Taylor splitting by generalized degree (``y`` has degree -1, ``xi`` degree 1)
gives ``A = sum_m A_m`` with

    A_0 = -d^2/dy^2 + xi^2
    A_m = xi^2 c_m y^m - (d-1) e_(m-1) y^(m-1) d/dy - lam N_(m-2) y^(m-2)/(m-2)!

where ``(F0/F)^2 = sum c_m y^m`` and ``F'/F = sum e_m y^m``. The levels solve
``A_0 E_m = -sum_(n>=1) A_n E_(m-n)`` with ``E_0 = exp(-xi y)``.

In the parameter form ``lam`` has degree 2, ``A_0 = -d^2/dy^2 + rho^2`` with
``rho^2 = xi^2 - lam N_0`` and the index enters ``A_m`` as ``-lam N_m y^m/m!``.
"""

from __future__ import annotations

import typing
from dataclasses import dataclass
from math import factorial

import sympy as sp

from itekit.errors import NonPolynomialRhs, UnsupportedOrder
from itekit.manifold import WarpedManifold

from .terms import DIM, LAM, T, XI, Y, SymbolSeries

MAX_ORDER = 6


@dataclass(frozen=True)
class BoundaryJets:
    """Inward normal derivatives of the warp and index at one boundary sphere.

    Entries may be exact numbers or free symbols."""

    warp: tuple[sp.Expr, ...]
    index: tuple[sp.Expr, ...]
    dimension: typing.Any = DIM

    @classmethod
    def from_manifold(cls, m: WarpedManifold, component: int = 0, order: int = MAX_ORDER) -> BoundaryJets:
        return cls(
            tuple(m.inward_jets(m.warp, component, order)),
            tuple(m.inward_jets(m.index, component, order)),
            sp.Integer(m.dimension),
        )

    def warp_jet(self, k: int) -> sp.Expr:
        return self.warp[k] if k < len(self.warp) else sp.Integer(0)

    def index_jet(self, k: int) -> sp.Expr:
        return self.index[k] if k < len(self.index) else sp.Integer(0)


def _warp_series(jets: BoundaryJets, order: int) -> tuple[list[sp.Expr], list[sp.Expr]]:
    """Coefficients of ``(F0/F)^2`` and ``F'/F`` in powers of ``y`` up to ``order``."""

    f0 = jets.warp_jet(0)
    g = [sp.Integer(1)] + [jets.warp_jet(j) / (f0 * factorial(j)) for j in range(1, order + 2)]

    inverse = [sp.Integer(1)]
    for m in range(1, order + 1):
        inverse.append(sp.expand(-sum(g[j] * inverse[m - j] for j in range(1, m + 1))))

    squared = [sp.expand(sum(inverse[i] * inverse[m - i] for i in range(m + 1))) for m in range(order + 1)]
    slope = [(m + 1) * g[m + 1] for m in range(order + 1)]
    log_derivative = [sp.expand(sum(slope[i] * inverse[m - i] for i in range(m + 1))) for m in range(order + 1)]
    return squared, log_derivative


class Splitting:
    """The operators ``A_m`` of one manifold acting on ``P(y) exp(-rate*y)``."""

    def __init__(self, jets: BoundaryJets, order: int, rate: sp.Symbol = XI, parametric: bool = False) -> None:
        self.jets = jets
        self.rate = rate
        self.parametric = parametric
        self.squared, self.log_derivative = _warp_series(jets, order)

    def model(self, p: sp.Expr) -> sp.Expr:
        """Polynomial part of ``A_0 (p exp(-rate*y))``."""

        return sp.expand(-sp.diff(p, Y, 2) + 2 * self.rate * sp.diff(p, Y))

    def apply(self, n: int, p: sp.Expr) -> sp.Expr:
        """Polynomial part of ``A_n (p exp(-rate*y))`` for ``n >= 1``."""

        out = XI**2 * self.squared[n] * Y**n * p
        out -= (self.jets.dimension - 1) * self.log_derivative[n - 1] * Y ** (n - 1) * (sp.diff(p, Y) - self.rate * p)
        k = n if self.parametric else n - 2
        if k >= (1 if self.parametric else 0):
            out -= LAM * self.jets.index_jet(k) * Y**k / factorial(k) * p
        return sp.expand(out)


def solve_model_ode(rhs: sp.Expr, rate: sp.Symbol = XI) -> sp.Expr:
    """Decaying solution of ``(-d^2/dy^2 + rate^2) v = rhs * exp(-rate*y)`` with ``v(0) = 0``.

    Returns the polynomial ``P`` with ``v = P exp(-rate*y)``. With
    ``P = sum a_j y^j`` the equation reads ``-P'' + 2 rate P' = rhs``, solved
    from the top coefficient down.

    Example:
        >>> solve_model_ode(c)
        c*y/(2*xi)"""

    rhs = sp.expand(sp.sympify(rhs))
    if rhs == 0:
        return sp.Integer(0)
    try:
        poly = sp.Poly(rhs, Y)
    except sp.PolynomialError as e:
        raise NonPolynomialRhs(f"right-hand side is not polynomial in y: {rhs}") from e
    if any(Y in c.free_symbols for c in poly.coeffs()):
        raise NonPolynomialRhs(f"right-hand side is not polynomial in y: {rhs}")

    r = list(reversed(poly.all_coeffs()))
    top = len(r) - 1
    a = [sp.Integer(0)] * (top + 3)
    for m in range(top, -1, -1):
        a[m + 1] = sp.expand((r[m] + (m + 2) * (m + 1) * a[m + 2]) / (2 * (m + 1) * rate))
    return sp.expand(sum(a[j] * Y**j for j in range(1, top + 2)))


def symbol_recursion(
    source: WarpedManifold | BoundaryJets,
    order: int,
    *,
    component: int = 0,
    rate: sp.Symbol = XI,
    parametric: bool = False,
) -> SymbolSeries:
    """Levels ``E_0..E_order`` for one manifold.

    Args:
        source: a manifold (jets read at ``component``) or explicit jets
        order (int): last level, at most 6
        rate: decay symbol of ``E_0``
        parametric (bool): use the parameter-form splitting"""

    if not 0 <= order <= MAX_ORDER:
        raise UnsupportedOrder(f"symbol order must be in 0..{MAX_ORDER}, got {order}", order=order)
    jets = source if isinstance(source, BoundaryJets) else BoundaryJets.from_manifold(source, component, order + 1)

    split = Splitting(jets, order, rate, parametric)
    polys = [sp.Integer(1)]
    for m in range(1, order + 1):
        rhs = -sum(split.apply(n, polys[m - n]) for n in range(1, m + 1))
        polys.append(solve_model_ode(rhs, rate))
    return SymbolSeries(tuple(polys), rate, parametric)


def dtn_symbol(series: SymbolSeries) -> list[sp.Expr]:
    """D-N symbol levels ``-dE_m/dy`` at ``y = 0``."""

    out = [series.rate]
    for p in series.polys[1:]:
        out.append(sp.expand(-sp.diff(p, Y).subs(Y, 0)))
    return out


def residual(series: SymbolSeries, jets: BoundaryJets, m: int) -> sp.Expr:
    """``A_0 E_m + sum_(n>=1) A_n E_(m-n)``, polynomial part; zero for an exact level."""

    split = Splitting(jets, series.order, series.rate, series.parametric)
    total = split.model(series.polys[m])
    total += sum(split.apply(n, series.polys[m - n]) for n in range(1, m + 1))
    return sp.simplify(sp.expand(total))


def homogeneity_defect(series: SymbolSeries, m: int) -> sp.Expr:
    """``P_m(y/t, t xi) - t^(-m) P_m(y, xi)``; zero when level ``m`` has degree ``-m``."""

    p = series.polys[m]
    scaled = p.subs({Y: Y / T, XI: T * XI}, simultaneous=True)
    return sp.simplify(sp.expand(scaled - T ** (-m) * p))


def apply_degree(series: SymbolSeries, jets: BoundaryJets, n: int, m: int) -> sp.Expr:
    """``A_n E_m`` scaled minus ``t^(2 - n - m)`` times itself; zero when the degree ledger holds."""

    split = Splitting(jets, max(series.order, n), series.rate, series.parametric)
    image = split.apply(n, series.polys[m])
    scaled = image.subs({Y: Y / T, XI: T * XI}, simultaneous=True)
    return sp.simplify(sp.expand(scaled - T ** (2 - n - m) * image))
