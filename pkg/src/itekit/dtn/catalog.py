from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from itekit.cache import SpectrumCache
from itekit.common import PoleIndex, parallel_map
from itekit.logger import get_logger
from itekit.manifold import Cap, ManifoldPair, WarpedManifold
from itekit.radial import DirichletEigenRecord, dirichlet_spectrum_mode
from itekit.settings import DEFAULT_TOLERANCES, Tolerances

log = get_logger(__name__)


def mode_spectrum(
    m: WarpedManifold,
    l: int,
    lambda_max: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
    cache: SpectrumCache | None = None,
) -> list[DirichletEigenRecord]:
    if cache is not None:
        return cache.spectrum(m, l, lambda_max, tol)
    return dirichlet_spectrum_mode(m, l, lambda_max, tol)


def manifold_spectrum(
    m: WarpedManifold,
    lambda_max: float,
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    cache: SpectrumCache | None = None,
    threads: int = 1,
) -> list[DirichletEigenRecord]:
    """Mode spectra ``l = 0..l_max`` up to ``lambda_max``, stopping at the first empty mode.

    Mode eigenvalues increase with ``l``, so an empty mode ends the scan."""

    records: list[DirichletEigenRecord] = []
    batch = max(1, threads)
    for start in range(0, l_max + 1, batch):
        modes = list(range(start, min(start + batch, l_max + 1)))
        spectra = parallel_map(lambda l: mode_spectrum(m, l, lambda_max, tol, cache), modes, threads)
        for found in spectra:
            if not found:
                return records
            records.extend(found)
    return records


@dataclass(frozen=True)
class PoleEntry:
    """One pole of either D-N map with multiplicities ``m1``, ``m2`` and overlap ``m``."""

    lambda0: float
    m1: int
    m2: int
    overlap: int
    records1: tuple[DirichletEigenRecord, ...] = field(default=(), repr=False)
    records2: tuple[DirichletEigenRecord, ...] = field(default=(), repr=False)
    coincident_modes: tuple[int, ...] = ()

    @property
    def modes(self) -> tuple[int, ...]:
        return tuple(sorted({r.l for r in self.records1 + self.records2}))

    def to_dict(self) -> dict:
        return {
            "lambda0": self.lambda0,
            "m1": self.m1,
            "m2": self.m2,
            "overlap": self.overlap,
            "modes": list(self.modes),
            "coincident_modes": list(self.coincident_modes),
        }


def ranges_intersect(m: WarpedManifold, a: DirichletEigenRecord, b: DirichletEigenRecord, tol: Tolerances) -> bool:
    """Whether two same-mode rank-one residues share their range."""

    if isinstance(m.domain, Cap):
        return True
    u, v = a.weighted_data, b.weighted_data
    cosine = abs(float(u @ v)) / (np.linalg.norm(u) * np.linalg.norm(v))
    return cosine >= 1.0 - tol.degeneracy_tol


def pole_catalog(
    pair: ManifoldPair,
    interval: tuple[float, float],
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    cache: SpectrumCache | None = None,
    threads: int = 1,
) -> list[PoleEntry]:
    """Merged poles of both manifolds in ``(a, b]``, sorted by ``lambda0``.

    Args:
        pair (ManifoldPair): validated pair
        interval: ``(a, b)`` with ``a > 0``
        l_max (int): last mode
        cache: optional spectrum cache"""

    a, b = interval
    if b <= a:
        return []

    index = PoleIndex(tol.degeneracy_window)
    for which, m in ((1, pair.m1), (2, pair.m2)):
        for rec in manifold_spectrum(m, b, l_max, tol, cache, threads):
            index.add(rec.lambda0, (which, rec))

    entries = []
    for key, found in index.between(a, b):
        ones = tuple(r for w, r in found if w == 1)
        twos = tuple(r for w, r in found if w == 2)
        overlap = 0
        coincident = []
        for r1 in ones:
            for r2 in twos:
                if r1.l != r2.l:
                    continue
                coincident.append(r1.l)
                if ranges_intersect(pair.m1, r1, r2, tol):
                    overlap += r1.mult_geometric
        entries.append(
            PoleEntry(
                float(key),
                sum(r.mult_geometric for r in ones),
                sum(r.mult_geometric for r in twos),
                overlap,
                ones,
                twos,
                tuple(sorted(coincident)),
            )
        )
    log.debug(f"pole catalog ({a}, {b}]: {len(entries)} poles")
    return entries
