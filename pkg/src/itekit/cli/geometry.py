from __future__ import annotations

import click
import sympy as sp

from itekit.errors import ConfigError
from itekit.manifold import Case
from itekit.symbolic import (
    XI,
    difference_principal_symbol,
    parameter_principal_symbol,
    symbol_recursion,
)

from .session import Session


@click.command()
@click.pass_obj
def validate(session: Session):
    """Check the pair assumptions and report case and sign

    Exit code 2 with the violated assumption on standard error when the pair
    is not admissible.

    Example:
        itekit --config pair.json validate
    """

    pair = session.config.pair()
    session.write_json(
        {
            "case": pair.case.value,
            "base_case": pair.base_case.value,
            "gamma": pair.gamma,
            "s": pair.s,
            "dimension": pair.dimension,
            "components": pair.components,
            "zeta": [str(z) for z in pair.zeta],
            "manifolds": [pair.m1.describe(), pair.m2.describe()],
        }
    )


def _value(text: str):
    return sp.sympify(text, locals={"I": sp.I, "i": sp.I}) if text else None


@click.command()
@click.option("--order", type=click.IntRange(min=0), help="Deepest level (default: symbol.order)")
@click.option("--case", type=click.Choice([c.value for c in Case]), help="Case to check against")
@click.option("--lambda", "lam", type=str, help="Spectral parameter off [0, oo) for the parameter form")
@click.option("--xi", type=str, help="Evaluate at this |xi'|")
@click.option("--format", "style", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.pass_obj
def symbol(session: Session, order=None, case=None, lam=None, xi=None, style="json"):
    """Symbol series of one manifold, or principal symbols of a pair

    With a `pair` block the D-N difference principal symbol is reported per
    boundary component; `--lambda` switches to the parameter form. With a
    single `manifold` block the full recursion is printed.

    Example:
        itekit --config pair.json symbol --lambda -1 --xi 1
    """

    options = session.config.symbol
    order = options.order if order is None else order
    case = case or options.case or None
    lam = _value(lam if lam is not None else options.lam)
    xi = _value(xi if xi is not None else options.xi)

    if "pair" not in session.config.effective:
        m = session.config.manifold()
        series = [
            symbol_recursion(m, order, component=c)
            for c in range(m.components)
        ]
        if style == "text":
            session.emit("\n\n".join(s.pretty() for s in series) + "\n")
        else:
            session.write_json({"manifold": m.to_dict(), "series": [s.to_dict() for s in series]})
        return

    pair = session.config.pair()
    rows = []
    for c in range(pair.components):
        if lam is None:
            term = difference_principal_symbol(pair, case, component=c, order=order)
        else:
            term = parameter_principal_symbol(pair, lam, case, component=c)
        expr = term.as_expr() if lam is None else term.coeff
        row = {"component": c, "term": term.to_dict(), "expr": str(expr)}
        if xi is not None:
            if lam is None:
                raise ConfigError("--xi needs --lambda for a numeric value")
            row["value"] = complex(sp.N(term.coeff.subs(XI, xi)))
        rows.append(row)

    if style == "text":
        session.emit("\n".join(f"[{r['component']}] {r['expr']}" for r in rows) + "\n")
    else:
        session.write_json({"case": pair.case.value, "parameter": lam is not None, "symbols": rows})


def register(cli: click.Group):
    cli.add_command(validate)
    cli.add_command(symbol)
