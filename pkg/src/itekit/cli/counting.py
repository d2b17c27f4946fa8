from __future__ import annotations

import click
import numpy as np

from itekit.ite import check_alpha, default_alpha, ite_search
from itekit.weyl import verify_lower_bound, weyl_fit

from .session import Session


def _alpha(session: Session, pair) -> float:
    search = session.config.search
    if search.alpha > 0:
        return check_alpha(pair, search.alpha, session.tolerances)
    return default_alpha(pair, search.alpha_fraction, session.tolerances)


@click.command()
@click.option("--interval", nargs=2, type=float, help="Search interval (a, b] (default: search.interval)")
@click.option("--strict", is_flag=True, help="Fail on unconfirmed tangential roots instead of flagging them")
@click.option("--l-max", type=click.IntRange(min=0), help="Last mode (default: search.l_max)")
@click.pass_obj
def ite(session: Session, interval=None, l_max=None, strict=False):
    """Interior transmission eigenvalues in an interval, as JSON

    Example:
        itekit --config pair.json ite --interval 0.05 2
    """

    search = session.config.search
    a, b = interval or search.interval
    pair = session.config.pair()
    records = ite_search(
        pair,
        (a, b),
        search.l_max if l_max is None else l_max,
        session.tolerances,
        divisions=search.scan_divisions,
        cache=session.cache,
        threads=session.threads,
        strict=strict,
    )
    session.write_json(
        {
            "interval": [a, b],
            "case": pair.case.value,
            "gamma": pair.gamma,
            "records": [r.to_dict() for r in records],
            "N_T": sum(r.multiplicity for r in records),
            "ambiguous": sum(r.ambiguous for r in records),
        }
    )


@click.command()
@click.option("--jumps/--no-jumps", default=True, show_default=True, help="Measure N_- jumps at every pole")
@click.option("--decomposition/--no-decomposition", default=False, show_default=True)
@click.option("--l-max", type=click.IntRange(min=0), help="Last mode (default: search.l_max)")
@click.pass_obj
def weyl(session: Session, jumps=True, decomposition=False, l_max=None):
    """Lower-bound report for a pair, or the Weyl fit of one manifold, as JSON

    The grid has `search.grid` points up to the end of `search.interval`.
    A failed inequality exits with code 3.

    Example:
        itekit --config crossing.json --out report.json weyl
    """

    search = session.config.search
    l_max = search.l_max if l_max is None else l_max
    a, b = search.interval
    tol = session.tolerances

    if "pair" not in session.config.effective:
        m = session.config.manifold()
        fit = weyl_fit(m, np.linspace(max(a, b / search.grid), b, search.grid), l_max, tol, threads=session.threads)
        session.write_json({"manifold": m.to_dict(), "weyl": fit.to_dict()})
        return

    pair = session.config.pair()
    alpha = _alpha(session, pair)
    grid = np.linspace(max(a, alpha), b, search.grid + 1)[1:]
    report = verify_lower_bound(
        pair,
        alpha,
        grid,
        l_max,
        tol,
        cache=session.cache,
        threads=session.threads,
        with_jumps=jumps,
        with_decomposition=decomposition,
    )
    session.write_json({"report": report.to_dict()})


def register(cli: click.Group):
    cli.add_command(ite)
    cli.add_command(weyl)
