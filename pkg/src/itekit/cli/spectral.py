from __future__ import annotations

import click
import numpy as np

from itekit.dtn import manifold_spectrum, mu_curves
from itekit.radial import dtn_sweep

from .session import Session


@click.command()
@click.option("--lambda-max", type=float, help="Upper end (default: end of search.interval)")
@click.option("--l-max", type=click.IntRange(min=0), help="Last mode (default: search.l_max)")
@click.pass_obj
def spectrum(session: Session, lambda_max=None, l_max=None):
    """Dirichlet spectrum of the configured manifold(s) as CSV

    Rows `manifold, l, j, lambda, multiplicity`, sorted by lambda.

    Example:
        itekit --config disk.json --out disk.csv spectrum --lambda-max 100
    """

    search = session.config.search
    lambda_max = search.interval[1] if lambda_max is None else lambda_max
    l_max = search.l_max if l_max is None else l_max

    rows = []
    for m in session.config.manifolds():
        for rec in manifold_spectrum(m, lambda_max, l_max, session.tolerances, session.cache, session.threads):
            rows.append((m.name, rec.l, rec.index, rec.lambda0, rec.mult_geometric))
    rows.sort(key=lambda row: (row[3], row[0], row[1], row[2]))
    session.write_csv(["manifold", "l", "j", "lambda", "multiplicity"], rows)


def _upper(prefix: str, c: int) -> list[str]:
    return [f"{prefix}_{i}{j}" for i in range(c) for j in range(i, c)]


@click.command("dtn-sweep")
@click.option("--modes", nargs=2, type=int, help="First and last mode (default: search.modes)")
@click.option("--points", type=click.IntRange(min=2), help="Grid points (default: search.points)")
@click.option("--interval", nargs=2, type=float, help="Grid ends (default: search.interval)")
@click.pass_obj
def dtn_sweep_cmd(session: Session, modes=None, points=None, interval=None):
    """D-N matrices of both manifolds and the mu values over a grid, as CSV

    Entries are in the orthonormal mode basis, components ordered outer then
    inner. Cells at poles are empty.

    Example:
        itekit --config pair.json dtn-sweep --modes 0 2 --points 400
    """

    search = session.config.search
    lo, hi = modes or search.modes
    a, b = interval or search.interval
    grid = np.linspace(a, b, points or search.points)
    pair = session.config.pair()
    tol = session.tolerances
    c = pair.components

    header = ["l", "lambda"] + _upper("m1", c) + _upper("m2", c) + [f"mu{i + 1}" for i in range(c)]
    header += ["pole1", "pole2"]
    upper = np.triu_indices(c)
    rows = []
    for l in range(lo, hi + 1):
        one = dtn_sweep(pair.m1, l, grid, tol)
        two = dtn_sweep(pair.m2, l, grid, tol)
        curves = mu_curves(pair, l, grid, tol)
        for i, lam in enumerate(grid):
            rows.append(
                [l, lam]
                + list(one.matrices[i][upper])
                + list(two.matrices[i][upper])
                + list(curves.values[i])
                + [int(one.is_pole[i]), int(two.is_pole[i])]
            )
    session.write_csv(header, rows)


def register(cli: click.Group):
    cli.add_command(spectrum)
    cli.add_command(dtn_sweep_cmd)
