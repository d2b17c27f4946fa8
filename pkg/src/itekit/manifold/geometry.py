"""Warped-product manifolds ``dr^2 + f(r)^2 h`` over the round sphere.

Warp ``f`` and index ``n`` are polynomials with rational coefficients so that
boundary jets can be compared exactly. Numeric evaluation goes through numpy
polynomials built once from the exact coefficients.
"""

from __future__ import annotations

import typing
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import sympy as sp
from numpy.polynomial import Polynomial

from itekit.errors import ConfigError, GeometryError

R = sp.Symbol("r", real=True)


def parse_number(value: typing.Any) -> sp.Expr:
    """Exact number from an int, a decimal/fraction string or a constant name.

    Args:
        value: ``1``, ``"2/5"``, ``"0.4"``, ``"pi"``, ``"pi/2"``"""

    if isinstance(value, bool):
        raise ConfigError(f"not a number: {value!r}")
    if isinstance(value, int):
        return sp.Integer(value)
    if isinstance(value, float):
        return sp.nsimplify(repr(value), rational=True)
    if isinstance(value, str):
        try:
            expr = sp.sympify(value.strip(), locals={"pi": sp.pi}, rational=True)
        except (sp.SympifyError, TypeError, SyntaxError) as e:
            raise ConfigError(f"cannot parse number {value!r}") from e
        if expr.free_symbols or not expr.is_real:
            raise ConfigError(f"not a real constant: {value!r}")
        return expr
    if isinstance(value, sp.Expr) and not value.free_symbols:
        return value
    raise ConfigError(f"not a number: {value!r}")


def make_poly(coeffs: typing.Iterable[typing.Any]) -> sp.Poly:
    """Polynomial in ``r`` from ascending coefficients (rational only)."""

    parsed = [parse_number(c) for c in coeffs]
    if not parsed:
        raise ConfigError("polynomial needs at least one coefficient")
    for c in parsed:
        if not c.is_rational:
            raise ConfigError(f"polynomial coefficients must be rational, got {c}")
    return sp.Poly(list(reversed(parsed)), R, domain=sp.QQ)


def poly_coeffs(poly: sp.Poly) -> list[str]:
    """Ascending coefficient strings, the canonical serialized form."""

    return [str(c) for c in reversed(poly.all_coeffs())]


@dataclass(frozen=True)
class Cap:
    """``r`` in ``[0, r_outer]``, smooth cap at the origin, one boundary sphere."""

    r_outer: sp.Expr

    @property
    def components(self) -> int:
        return 1

    @property
    def radii(self) -> tuple[sp.Expr, ...]:
        return (self.r_outer,)

    @property
    def start(self) -> sp.Expr:
        return sp.Integer(0)

    def to_dict(self) -> dict:
        return {"cap": str(self.r_outer)}


@dataclass(frozen=True)
class Shell:
    """``r`` in ``[r_inner, r_outer]`` with two boundary spheres."""

    r_inner: sp.Expr
    r_outer: sp.Expr

    @property
    def components(self) -> int:
        return 2

    @property
    def radii(self) -> tuple[sp.Expr, ...]:
        # component order: outer, inner
        return (self.r_outer, self.r_inner)

    @property
    def start(self) -> sp.Expr:
        return self.r_inner

    def to_dict(self) -> dict:
        return {"shell": [str(self.r_inner), str(self.r_outer)]}


RadialDomain = typing.Union[Cap, Shell]


def jet(poly: sp.Poly, order: int, point: sp.Expr) -> sp.Expr:
    """Exact ``order``-th derivative of ``poly`` at ``point``."""

    return sp.expand(sp.diff(poly.as_expr(), R, order).subs(R, point))


def _roots_inside(poly: sp.Poly, lo: sp.Expr, hi: sp.Expr, closed: bool) -> list:
    if poly.is_zero:
        return [lo]
    found = []
    for root in sp.real_roots(poly):
        above = bool(root >= lo) if closed else bool(root > lo)
        below = bool(root <= hi) if closed else bool(root < hi)
        if above and below:
            found.append(root)
    return found


@dataclass(frozen=True)
class WarpedManifold:
    """One separable manifold: dimension, radial domain, warp and index."""

    dimension: int
    domain: RadialDomain
    warp: sp.Poly
    index: sp.Poly
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.dimension < 2:
            raise GeometryError(f"dimension must be >= 2, got {self.dimension}")

        lo, hi = self.domain.start, self.domain.r_outer
        if not bool(hi > lo) or bool(lo < 0):
            raise GeometryError(f"bad radial interval [{lo}, {hi}]")

        if _roots_inside(self.warp, lo, hi, closed=False) or not bool(
            jet(self.warp, 0, (lo + hi) / 2) > 0
        ):
            raise GeometryError("warp f must be positive on the open radial interval")

        if isinstance(self.domain, Cap):
            if jet(self.warp, 0, 0) != 0 or jet(self.warp, 1, 0) != 1:
                raise GeometryError("a cap needs f(0) = 0 and f'(0) = 1")
        elif not bool(jet(self.warp, 0, lo) > 0):
            raise GeometryError("warp must be positive on both boundary spheres")

        if _roots_inside(self.index, lo, hi, closed=True) or not bool(
            jet(self.index, 0, hi) > 0
        ):
            raise GeometryError("index n must be positive on the closed radial interval")

    @classmethod
    def from_dict(cls, block: dict, name: str = "") -> WarpedManifold:
        """Build from a config block.

        Args:
            block (dict): ``{"dimension", "domain", "warp", "index"}``
            name (str): label used in logs"""

        try:
            dimension = int(block["dimension"])
            domain_block = block["domain"]
            warp, index = block["warp"], block["index"]
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"manifold block {name or ''} is incomplete: {e}") from e

        if "cap" in domain_block:
            domain = Cap(parse_number(domain_block["cap"]))
        elif "shell" in domain_block:
            inner, outer = domain_block["shell"]
            domain = Shell(parse_number(inner), parse_number(outer))
        else:
            raise ConfigError("domain must be {'cap': r} or {'shell': [a, b]}")

        return cls(dimension, domain, make_poly(warp), make_poly(index), name=name)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "domain": self.domain.to_dict(),
            "warp": poly_coeffs(self.warp),
            "index": poly_coeffs(self.index),
        }

    # numeric views

    @property
    def components(self) -> int:
        return self.domain.components

    @cached_property
    def r_outer(self) -> float:
        return float(self.domain.r_outer)

    @cached_property
    def r_start(self) -> float:
        return float(self.domain.start)

    @cached_property
    def radii(self) -> tuple[float, ...]:
        return tuple(float(r) for r in self.domain.radii)

    @cached_property
    def orientation(self) -> tuple[int, ...]:
        """Sign of the outward normal in terms of ``d/dr``, per component."""

        return (1, -1)[: self.components]

    @cached_property
    def f(self) -> Polynomial:
        return Polynomial([float(c) for c in reversed(self.warp.all_coeffs())])

    @cached_property
    def df(self) -> Polynomial:
        return self.f.deriv()

    @cached_property
    def n(self) -> Polynomial:
        return Polynomial([float(c) for c in reversed(self.index.all_coeffs())])

    @cached_property
    def boundary_warp(self) -> np.ndarray:
        return np.array([self.f(r) for r in self.radii])

    @cached_property
    def index_max(self) -> float:
        grid = np.linspace(self.r_start, self.r_outer, 257)
        return float(np.max(self.n(grid)))

    # exact jets

    def warp_derivative(self, order: int, component: int) -> sp.Expr:
        """``d^k f / dr^k`` at a boundary component, exact."""

        return jet(self.warp, order, self.domain.radii[component])

    def index_derivative(self, order: int, component: int) -> sp.Expr:
        """``d^k n / dr^k`` at a boundary component, exact."""

        return jet(self.index, order, self.domain.radii[component])

    def normal_index_derivative(self, component: int) -> sp.Expr:
        """Outward normal derivative of ``n`` at a component."""

        return self.orientation[component] * self.index_derivative(1, component)

    def inward_jets(self, poly: sp.Poly, component: int, order: int) -> list[sp.Expr]:
        """Derivatives ``d^k/dy^k`` at ``y = 0`` along the inward normal ``y``.

        With ``r = r_c - s*y`` (``s`` the outward orientation) the k-th inward
        derivative is ``(-s)^k`` times the k-th radial derivative."""

        r_c = self.domain.radii[component]
        s = self.orientation[component]
        return [sp.expand((-s) ** k * jet(poly, k, r_c)) for k in range(order + 1)]

    def describe(self) -> str:
        kind = "cap" if isinstance(self.domain, Cap) else "shell"
        return (
            f"{self.name or 'manifold'}: d={self.dimension} {kind} "
            f"f={self.warp.as_expr()} n={self.index.as_expr()}"
        )
