"""Prüfer phase integration of the radial equation.

The radial reduction of ``(-Delta - lam n) u = 0`` in mode ``l`` is written in
self-adjoint form ``(p v')' + (lam n p - q) v = 0`` with ``p = f^{d-1}`` and
``q = kappa f^{d-3}``. With ``v = rho sin(theta)`` and ``p v' = rho cos(theta)``:

    theta'     = cos^2/p + (lam n p - q) sin^2
    (log rho)' = (1/p - (lam n p - q)) sin cos
    J'         = n p sin^2 - 2 (log rho)' J

``J(r) = int n p v^2 / rho(r)^2`` gives both the eigenfunction normalization and
``d theta / d lam`` at the far end. Several spectral parameters are integrated
in one solve so they share a step sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from itekit.errors import IntegrationFailure
from itekit.logger import get_logger
from itekit.manifold import Cap, WarpedManifold, kappa
from itekit.settings import DEFAULT_TOLERANCES, Tolerances

log = get_logger(__name__)

METHOD = "DOP853"
FALLBACK_METHOD = "Radau"
MAX_OFFSET_SHRINK = 4


@dataclass(frozen=True)
class PhaseEnd:
    """Prüfer data at the far end of an integration, one entry per parameter."""

    lambdas: np.ndarray
    theta: np.ndarray
    log_rho: np.ndarray  # log rho(end) - log rho(start)
    weight: np.ndarray | None  # J(end) > 0; d theta(end) / d lam = +J forward, -J backward
    start: float
    end: float


class RadialCoefficients:
    """``p``, ``q`` and ``n`` of one mode on one manifold."""

    def __init__(self, m: WarpedManifold, l: int) -> None:
        self.m = m
        self.l = l
        self.kappa = float(kappa(l, m.dimension))
        self.d = m.dimension

    def p(self, r: float) -> float:
        return self.m.f(r) ** (self.d - 1)

    def q(self, r: float) -> float:
        if self.kappa == 0.0:
            return 0.0
        return self.kappa * self.m.f(r) ** (self.d - 3)

    def n(self, r: float) -> float:
        return self.m.n(r)


def cap_offset(m: WarpedManifold, l: int, lam_max: float, tol: Tolerances) -> float:
    """Start radius for a cap, shrunk until the neglected Frobenius term is below ``ode_rel``.

    The next term of the regular solution is relatively of size
    ``|f''(0)| eps + |lam| n(0) eps^2 / (2(2l + d))``; its effect at the boundary
    is damped by at least ``eps / r_outer`` (times ``|log eps|`` for ``d = 2, l = 0``)."""

    eps = tol.cap_offset * m.r_outer
    curvature = abs(m.df.deriv()(0.0))
    n0 = abs(m.n(0.0))
    for _ in range(MAX_OFFSET_SHRINK + 1):
        remainder = curvature * eps + abs(lam_max) * n0 * eps**2 / (2 * (2 * l + m.dimension))
        damping = (eps / m.r_outer) * max(1.0, abs(np.log(eps / m.r_outer)))
        if remainder * damping <= tol.ode_rel:
            return eps
        eps /= 10.0
    raise IntegrationFailure(
        "cap start offset cannot meet the ODE tolerance",
        l=l,
        lam=lam_max,
        remainder=remainder * damping,
    )


def _solve(rhs, span, y0, tol: Tolerances, what: str):
    atol = tol.ode_rel * 1e-3
    sol = solve_ivp(rhs, span, y0, method=METHOD, rtol=tol.ode_rel, atol=atol)
    if not sol.success:
        log.warning(f"{what}: {METHOD} failed ({sol.message}), retrying with {FALLBACK_METHOD}")
        sol = solve_ivp(rhs, span, y0, method=FALLBACK_METHOD, rtol=tol.ode_rel, atol=atol)
    if not sol.success or not np.all(np.isfinite(sol.y[:, -1])):
        raise IntegrationFailure(f"{what}: {sol.message}", span=list(span))
    return sol.y[:, -1]


def integrate_phase(
    m: WarpedManifold,
    l: int,
    lambdas: np.ndarray | float,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    weight: bool = True,
    backward: bool = False,
) -> PhaseEnd:
    """Integrate the Prüfer system for real parameters ``lambdas``.

    Forward runs start at the cap (regular solution) or at the inner sphere with
    ``v = 0``; backward runs (shells only) start at the outer sphere with
    ``v = 0`` and end at the inner one.

    Args:
        m (WarpedManifold): the manifold
        l (int): transversal mode
        lambdas: real spectral parameters, integrated together
        tol (Tolerances): tolerances
        weight (bool): also integrate ``J``
        backward (bool): integrate from the outer to the inner sphere"""

    lambdas = np.atleast_1d(np.asarray(lambdas, dtype=float))
    k = lambdas.size
    co = RadialCoefficients(m, l)
    is_cap = isinstance(m.domain, Cap)
    if backward and is_cap:
        raise ValueError("backward integration needs a shell")

    if is_cap:
        eps = cap_offset(m, l, float(np.max(np.abs(lambdas))), tol)
        start, end = eps, m.r_outer
        p0 = co.p(eps)
        theta0 = np.arctan2(eps, p0 * l)
        # int_0^eps n p v^2 / rho^2 with v = r^l, p ~ r^{d-1}
        j0 = co.n(0.0) * eps**m.dimension / (2 * l + m.dimension) / (1.0 + (l * eps ** (m.dimension - 2)) ** 2)
    elif backward:
        start, end = m.r_outer, m.r_start
        theta0, j0 = 0.0, 0.0
    else:
        start, end = m.r_start, m.r_outer
        theta0, j0 = 0.0, 0.0

    def rhs(r, y):
        theta = y[:k]
        s, c = np.sin(theta), np.cos(theta)
        p = co.p(r)
        nr = co.n(r)
        big_q = lambdas * nr * p - co.q(r)
        dtheta = c * c / p + big_q * s * s
        dlog = (1.0 / p - big_q) * s * c
        if not weight:
            return np.concatenate([dtheta, dlog])
        dj = nr * p * s * s - 2.0 * dlog * y[2 * k :]
        return np.concatenate([dtheta, dlog, dj])

    y0 = [np.full(k, theta0), np.zeros(k)]
    if weight:
        y0.append(np.full(k, j0))
    y = _solve(rhs, (start, end), np.concatenate(y0), tol, f"phase l={l}")

    theta, log_rho = y[:k], y[k : 2 * k]
    j_end = y[2 * k :] if weight else None
    if backward and j_end is not None:
        # the variational equation run towards smaller r accumulates -J
        j_end = -j_end
    return PhaseEnd(lambdas, theta, log_rho, j_end, start, end)


def integrate_riccati(
    m: WarpedManifold,
    l: int,
    lam: complex,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    backward: bool = False,
) -> tuple[complex, complex]:
    """Off-axis integration for complex ``lam``.

    Caps integrate ``u = p v'/v`` and return ``(u(end), 0)``. Shells integrate
    ``s = v/(p v')`` from a Dirichlet end together with ``L = log(p v')`` and
    return ``(s(end), L(end))``. For non-real ``lam`` neither quantity meets a
    singularity on the radial interval."""

    co = RadialCoefficients(m, l)
    lam = complex(lam)

    if isinstance(m.domain, Cap):
        eps = cap_offset(m, l, abs(lam), tol)

        def rhs(r, y):
            p = co.p(r)
            big_q = lam * co.n(r) * p - co.q(r)
            return [-big_q - y[0] * y[0] / p]

        u0 = co.p(eps) * l / eps
        y = _solve(rhs, (eps, m.r_outer), np.array([u0], dtype=complex), tol, f"riccati l={l}")
        return complex(y[0]), 0j

    def rhs(r, y):
        p = co.p(r)
        big_q = lam * co.n(r) * p - co.q(r)
        return [1.0 / p + big_q * y[0] * y[0], -big_q * y[0]]

    span = (m.r_outer, m.r_start) if backward else (m.r_start, m.r_outer)
    y = _solve(rhs, span, np.zeros(2, dtype=complex), tol, f"riccati l={l}")
    return complex(y[0]), complex(y[1])
