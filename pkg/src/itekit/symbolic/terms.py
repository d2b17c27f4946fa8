"""Marker symbols, symbol terms and series."""

from __future__ import annotations

from dataclasses import dataclass

import sympy as sp

# markers
LAM = sp.Symbol("lambda")
XI = sp.Symbol("xi", positive=True)  # |xi'| on the boundary
Y = sp.Symbol("y", nonnegative=True)  # inward normal distance
T = sp.Symbol("t", positive=True)  # homogeneity scaling
RHO1 = sp.Symbol("rho_1")
RHO2 = sp.Symbol("rho_2")
RHO = sp.Symbol("rho")
DIM = sp.Symbol("d", positive=True, integer=True)

N1, N2 = sp.symbols("n_1 n_2", positive=True)
DNU_N1, DNU_N2 = sp.symbols("dnu_n_1 dnu_n_2", real=True)
F_B = sp.Symbol("f_b", positive=True)

PLAIN = "exp(-xi*y)"
PARAMETER = "exp(-rho*y)"


def canonical(expr: sp.Expr) -> sp.Expr:
    """Fixed rational-function form used for exact comparison."""

    return sp.factor(sp.cancel(sp.expand(expr)))


@dataclass(frozen=True)
class SymbolTerm:
    """``coeff * y^a * rate^(-b) * exp(-rate*y)``.

    For the plain decay the rate is ``xi`` and the generalized degree is
    ``-a - b``. Parameter-form principal symbols keep their radicals in
    ``coeff`` and record the order in ``b``."""

    coeff: sp.Expr
    a: int
    b: int
    decay: str = PLAIN

    @property
    def degree(self) -> int:
        return -self.a - self.b

    def sort_key(self) -> tuple:
        return (self.decay, self.a, self.b)

    def as_expr(self, rate: sp.Symbol = XI) -> sp.Expr:
        return self.coeff * Y**self.a * rate ** (-self.b)

    def to_dict(self) -> dict:
        return {"coeff": str(self.coeff), "a": self.a, "b": self.b, "decay": self.decay}

    def __str__(self) -> str:
        return f"({self.coeff}) y^{self.a} xi^{-self.b} {self.decay}"


def split_terms(poly_part: sp.Expr, rate: sp.Symbol, decay: str) -> list[SymbolTerm]:
    """Canonical term list of ``poly_part * exp(-rate*y)``, sorted by ``(decay, a, b)``."""

    poly_part = sp.expand(poly_part)
    if poly_part == 0:
        return []
    grouped: dict[tuple[int, int], sp.Expr] = {}
    for (a,), coeff in sp.Poly(poly_part, Y).terms():
        for piece in sp.Add.make_args(sp.expand(coeff)):
            c, e = piece.as_coeff_exponent(rate)
            key = (int(a), int(-e))
            grouped[key] = grouped.get(key, 0) + c
    terms = [
        SymbolTerm(canonical(c), a, b, decay)
        for (a, b), c in grouped.items()
        if sp.expand(c) != 0
    ]
    return sorted(terms, key=SymbolTerm.sort_key)


@dataclass(frozen=True)
class SymbolSeries:
    """Levels ``E_m = P_m(y) exp(-rate*y)``, ``m = 0..N``; ``polys`` holds the ``P_m``."""

    polys: tuple[sp.Expr, ...]
    rate: sp.Symbol = XI
    parametric: bool = False

    @property
    def order(self) -> int:
        return len(self.polys) - 1

    @property
    def decay(self) -> str:
        return PARAMETER if self.parametric else PLAIN

    @property
    def levels(self) -> list[list[SymbolTerm]]:
        return [split_terms(p, self.rate, self.decay) for p in self.polys]

    def level_expr(self, m: int) -> sp.Expr:
        return self.polys[m] * sp.exp(-self.rate * Y)

    def to_dict(self) -> dict:
        return {
            "decay": self.decay,
            "levels": [[t.to_dict() for t in level] for level in self.levels],
        }

    def pretty(self) -> str:
        lines = []
        for m, p in enumerate(self.polys):
            lines.append(f"E_{m} =")
            lines.append(sp.pretty(sp.factor(p) * sp.exp(-self.rate * Y), use_unicode=True))
        return "\n".join(lines)
