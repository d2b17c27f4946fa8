"""Principal symbols of ``Lambda_1 - Lambda_2 - zeta`` and the large-mode tail."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import sympy as sp

from itekit.errors import (
    AmbiguousCase,
    BranchOnCut,
    CancellationBeyondOrder,
    EllipticRegimeViolation,
    VerificationFailure,
)
from itekit.logger import get_logger
from itekit.manifold import Case, ManifoldPair, boundary_wavenumber

from .recursion import MAX_ORDER, BoundaryJets, dtn_symbol, symbol_recursion
from .terms import (
    DIM,
    DNU_N1,
    DNU_N2,
    F_B,
    LAM,
    N1,
    N2,
    PARAMETER,
    PLAIN,
    RHO,
    RHO1,
    RHO2,
    XI,
    SymbolTerm,
    canonical,
)

log = get_logger(__name__)

DEFAULT_ORDER = 3


def closed_form(case: Case) -> sp.Expr:
    """Principal symbol of the D-N difference in the marker algebra."""

    if case is Case.A21:
        return -LAM * (N1 - N2) / (2 * XI)
    if case is Case.A22:
        return LAM * (DNU_N1 - DNU_N2) / (4 * XI**2)
    raise AmbiguousCase("the zeta case has no D-N difference closed form; its principal part is -zeta")


def parameter_closed_form(case: Case) -> sp.Expr:
    """Parameter-form principal symbol, divided by ``lambda``, with ``rho_k^2 = xi^2 - lambda n_k``."""

    if case is Case.A21:
        return -(N1 - N2) / (RHO1 + RHO2)
    if case is Case.A22:
        return (DNU_N1 - DNU_N2) / (4 * RHO**2)
    raise AmbiguousCase("the zeta case has no parameter closed form")


def _markers(pair: ManifoldPair, component: int) -> dict:
    return {
        N1: pair.m1.index_derivative(0, component),
        N2: pair.m2.index_derivative(0, component),
        DNU_N1: pair.m1.normal_index_derivative(component),
        DNU_N2: pair.m2.normal_index_derivative(component),
    }


def _first_nonzero(levels: list[sp.Expr], start: int = 0) -> int | None:
    for m in range(start, len(levels)):
        if canonical(levels[m]) != 0:
            return m
    return None


def _resolve_case(pair: ManifoldPair, case: Case | str | None) -> Case:
    case = Case(case) if isinstance(case, str) and case else case
    if case is None:
        return pair.case
    if case is not pair.case:
        raise AmbiguousCase(f"requested case {case.value} but the pair is {pair.case.value}")
    return case


@lru_cache(maxsize=64)
def difference_levels(pair: ManifoldPair, component: int = 0, order: int = DEFAULT_ORDER) -> tuple[sp.Expr, ...]:
    """``sigma_1,m - sigma_2,m`` (minus ``zeta`` at level 0) as expressions in ``lambda`` and ``xi``."""

    one = dtn_symbol(symbol_recursion(pair.m1, order, component=component))
    two = dtn_symbol(symbol_recursion(pair.m2, order, component=component))
    levels = [sp.expand(a - b) for a, b in zip(one, two)]
    levels[0] = sp.expand(levels[0] - pair.zeta[component])
    return tuple(levels)


def difference_principal_symbol(
    pair: ManifoldPair,
    case: Case | str | None = None,
    *,
    component: int = 0,
    order: int = DEFAULT_ORDER,
) -> SymbolTerm:
    """First nonvanishing level of the D-N difference symbol at ``y = 0``.

    The zeta case returns ``-zeta``. The A21 and A22 results are checked
    against ``closed_form`` with this pair's boundary values.

    Args:
        pair (ManifoldPair): validated pair
        case: optional, must match the pair
        component (int): boundary component
        order (int): deepest level tried"""

    case = _resolve_case(pair, case)
    if case is Case.ZETA:
        return SymbolTerm(canonical(-pair.zeta[component]), 0, 0, PLAIN)

    levels = difference_levels(pair, component, order)
    m = _first_nonzero(levels)
    if m is None:
        raise CancellationBeyondOrder(
            f"D-N difference symbol vanishes through level {order}",
            order=order,
            component=component,
        )
    term = SymbolTerm(canonical(levels[m] * XI ** (m - 1)), 0, m - 1, PLAIN)

    expected = canonical(closed_form(case).subs(_markers(pair, component)))
    if canonical(term.coeff * XI ** (-term.b)) != expected:
        raise VerificationFailure(
            "principal symbol disagrees with the closed form",
            found=str(term.coeff * XI ** (-term.b)),
            expected=str(expected),
        )
    return term


def generic_jets(case: Case, order: int) -> tuple[BoundaryJets, BoundaryJets]:
    """Symbolic jets for two manifolds under the case constraints.

    Warps share every jet. A21 pairs have free boundary indices ``n_1``,
    ``n_2``; A22 pairs share ``n`` and differ in their normal derivatives."""

    warp = (F_B,) + tuple(sp.Symbol(f"f_{k}", real=True) for k in range(1, order + 2))
    tail = range(2, order + 1)
    rest1 = tuple(sp.Symbol(f"n_1_{k}", real=True) for k in tail)
    rest2 = tuple(sp.Symbol(f"n_2_{k}", real=True) for k in tail)
    if case is Case.A21:
        first1 = (N1, sp.Symbol("n_1_1", real=True))
        first2 = (N2, sp.Symbol("n_2_1", real=True))
    elif case is Case.A22:
        shared = sp.Symbol("n", positive=True)
        # inward derivative is minus the outward one
        first1 = (shared, -DNU_N1)
        first2 = (shared, -DNU_N2)
    else:
        raise AmbiguousCase("generic jets are defined for A21 and A22 only")
    return (
        BoundaryJets(warp, first1 + rest1, DIM),
        BoundaryJets(warp, first2 + rest2, DIM),
    )


def generic_difference_principal_symbol(case: Case | str, order: int = DEFAULT_ORDER) -> SymbolTerm:
    """Principal symbol with free jets; equals ``closed_form(case)`` identically."""

    case = Case(case) if isinstance(case, str) else case
    jets1, jets2 = generic_jets(case, order)
    one = dtn_symbol(symbol_recursion(jets1, order))
    two = dtn_symbol(symbol_recursion(jets2, order))
    levels = [sp.expand(a - b) for a, b in zip(one, two)]
    m = _first_nonzero(levels)
    if m is None:
        raise CancellationBeyondOrder(f"generic difference vanishes through level {order}", order=order)
    return SymbolTerm(canonical(levels[m] * XI ** (m - 1)), 0, m - 1, PLAIN)


def _as_lambda(lam) -> sp.Expr:
    if isinstance(lam, complex):
        return sp.Float(lam.real) + sp.I * sp.Float(lam.imag)
    return sp.sympify(lam, locals={"I": sp.I, "i": sp.I})


def parameter_principal_symbol(
    pair: ManifoldPair,
    lam,
    case: Case | str | None = None,
    *,
    component: int = 0,
) -> SymbolTerm:
    """Parameter-form principal symbol divided by ``lambda``, as a function of ``xi``.

    Runs the parameter recursion to level 1 for both manifolds with decay
    rates ``rho_k = sqrt(xi^2 - lambda n_k)`` (principal branch) and rewrites the
    leading difference in radical form. ``lambda`` on ``[0, oo)`` is refused.

    Example:
        A21 pair ``n_1 = 1, n_2 = 2`` at ``lambda = -1``, ``xi = 1``: ``1/(sqrt(2) + sqrt(3))``"""

    lam = _as_lambda(lam)
    if sp.im(lam) == 0 and bool(sp.re(lam) >= 0):
        raise BranchOnCut(f"lambda={lam} lies on [0, oo); choose a value off the cut", lam=str(lam))

    case = _resolve_case(pair, case)
    if case is Case.ZETA:
        return SymbolTerm(canonical(-pair.zeta[component]), 0, 0, PARAMETER)

    markers = _markers(pair, component)
    shared = sp.expand(markers[N1] - markers[N2]) == 0
    rate1, rate2 = (RHO, RHO) if shared else (RHO1, RHO2)
    one = dtn_symbol(symbol_recursion(pair.m1, 1, component=component, rate=rate1, parametric=True))
    two = dtn_symbol(symbol_recursion(pair.m2, 1, component=component, rate=rate2, parametric=True))
    levels = [sp.expand(a - b) for a, b in zip(one, two)]
    m = _first_nonzero(levels)
    if m is None:
        raise CancellationBeyondOrder("parameter difference vanishes through level 1", order=1)

    squares = {
        rate1: XI**2 - LAM * markers[N1],
        rate2: XI**2 - LAM * markers[N2],
    }
    if m == 0:
        # rho_1 - rho_2 = (rho_1^2 - rho_2^2) / (rho_1 + rho_2)
        numerator = sp.expand((rate1**2 - rate2**2).subs(squares))
        form = numerator / (LAM * (rate1 + rate2))
    else:
        form = levels[m] / LAM

    expected = parameter_closed_form(case).subs(markers)
    if canonical(form - expected) != 0:
        raise VerificationFailure(
            "parameter principal symbol disagrees with the closed form",
            found=str(form),
            expected=str(expected),
        )

    radicals = {rate: sp.sqrt(square.subs(LAM, lam)) for rate, square in squares.items()}
    coeff = sp.simplify(form.subs(LAM, lam).subs(radicals))
    return SymbolTerm(coeff, 0, 1 if m == 0 else m + 1, PARAMETER)


@lru_cache(maxsize=64)
def _tail_functions(pair: ManifoldPair, component: int):
    base = pair.base_case if pair.case is Case.ZETA else pair.case
    order = min(MAX_ORDER, {Case.A21: 2, Case.A22: 3}[base] + 2)
    levels = difference_levels(pair, component, order)
    lead = _first_nonzero(levels)
    if lead is None:
        raise CancellationBeyondOrder(f"D-N difference symbol vanishes through level {order}", order=order)
    following = _first_nonzero(levels, lead + 1)
    picked = [levels[lead]] + ([levels[following]] if following is not None else [])
    return [sp.lambdify((LAM, XI), expr, "numpy") for expr in picked]


def tail_terms(pair: ManifoldPair, lam: float, l: int, component: int = 0) -> tuple[float, float]:
    """Leading and next nonvanishing difference-symbol values at mode ``l``.

    Raises EllipticRegimeViolation when ``xi^2 <= lambda * max n``."""

    xi = boundary_wavenumber(pair, l, component)
    n_max = max(pair.m1.index_max, pair.m2.index_max)
    if xi**2 <= lam * n_max:
        raise EllipticRegimeViolation(
            f"mode {l} is not in the elliptic regime at lambda={lam}",
            l=l,
            xi=xi,
            bound=float(np.sqrt(max(lam * n_max, 0.0))),
        )
    funcs = _tail_functions(pair, component)
    lead = float(funcs[0](lam, xi))
    following = float(funcs[1](lam, xi)) if len(funcs) > 1 else 0.0
    return lead, following


def tail_predict(pair: ManifoldPair, lam: float, l: int, component: int = 0, terms: int = 1) -> float:
    """Prediction of the mode-``l`` diagonal of ``Lambda_1 - Lambda_2 - zeta`` from the symbol.

    Args:
        terms (int): 1 for the leading term, 2 to add the next one"""

    lead, following = tail_terms(pair, lam, l, component)
    return lead + (following if terms > 1 else 0.0)
