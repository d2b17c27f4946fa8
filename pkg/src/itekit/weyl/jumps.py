"""Jumps of ``N_-`` across poles and regular ITEs.

``N_-(lambda)`` changes only where a ``mu`` curve crosses zero (a regular ITE)
or runs through a pole. The two contributions are measured separately and
checked against the residue-sign rule and the ITE count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from itekit.cache import SpectrumCache
from itekit.dtn import PoleEntry, count_negative, mode_weights, negative_counts, pole_catalog
from itekit.errors import NotAnEigenvalue, PoleSpacing, VerificationFailure
from itekit.ite import ITERecord, Kind
from itekit.logger import get_logger
from itekit.manifold import ManifoldPair
from itekit.radial import residue_mode
from itekit.settings import DEFAULT_TOLERANCES, Tolerances

log = get_logger(__name__)

SIGN_REL = 1e-8


@dataclass(frozen=True)
class JumpRecord:
    """Measured and predicted ``N_-`` jump at one pole."""

    lambda0: float
    eps: float
    delta: int
    predicted: int
    overlap: int
    residue_jump: int

    @property
    def consistent(self) -> bool:
        if self.overlap == 0:
            return self.delta == self.predicted
        return abs(self.delta - self.predicted) <= self.overlap

    def to_dict(self) -> dict:
        return {
            "lambda0": self.lambda0,
            "eps": self.eps,
            "delta_N": self.delta,
            "predicted": self.predicted,
            "overlap_bound": self.overlap,
            "residue_jump": self.residue_jump,
            "consistent": self.consistent,
        }


def residue_sign_jump(pair: ManifoldPair, entry: PoleEntry) -> int:
    """``s+ - s-`` of ``gamma W^(1/2) (Q1 - Q2) W^(1/2)``, summed over the modes at the pole."""

    jump = 0
    for l in entry.modes:
        q = sum(residue_mode(pair.m1, r).matrix for r in entry.records1 if r.l == l)
        q = q - sum(residue_mode(pair.m2, r).matrix for r in entry.records2 if r.l == l)
        root = np.sqrt(mode_weights(pair, l))
        values = np.linalg.eigvalsh(pair.gamma * root[:, None] * q * root[None, :])
        cut = SIGN_REL * max(1.0, float(np.max(np.abs(values))))
        mult = next(r.mult_geometric for r in entry.records1 + entry.records2 if r.l == l)
        jump += mult * (int(np.sum(values > cut)) - int(np.sum(values < -cut)))
    return jump


def _negatives(pair, lam, l_max, tol, threads) -> int:
    return count_negative(pair, lam, l_max, tol, threads=threads).count


def measure_jump(
    pair: ManifoldPair,
    lam: float,
    eps: float,
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    threads: int = 1,
) -> int:
    """``N_-(lam + eps) - N_-(lam - eps)``."""

    return _negatives(pair, lam + eps, l_max, tol, threads) - _negatives(pair, lam - eps, l_max, tol, threads)


def jump_analysis(
    pair: ManifoldPair,
    lambda0: float,
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    eps: float | None = None,
    cache: SpectrumCache | None = None,
    threads: int = 1,
    check: bool = True,
) -> JumpRecord:
    """Jump of ``N_-`` across the catalogued pole ``lambda0``.

    Without overlap the jump must equal ``gamma (m2 - m1)``; with overlap
    ``m`` it may deviate by at most ``m``. A failed rule raises
    VerificationFailure unless ``check`` is off.

    Args:
        eps (float): half window, ``jump_window * lambda0`` by default"""

    eps = tol.jump_window * lambda0 if eps is None else eps
    entries = pole_catalog(pair, (lambda0 - 2 * eps, lambda0 + 2 * eps), l_max, tol, cache, threads)
    hits = [e for e in entries if abs(e.lambda0 - lambda0) <= max(tol.degeneracy_window(lambda0), eps / 2)]
    if not hits:
        raise NotAnEigenvalue(f"{lambda0} is not a pole of either manifold", lam=lambda0)
    if len(entries) > 1:
        raise PoleSpacing(
            f"another pole lies within 2*eps of {lambda0}",
            lam=lambda0,
            eps=eps,
            poles=[e.lambda0 for e in entries],
        )

    entry = hits[0]
    delta = measure_jump(pair, entry.lambda0, eps, l_max, tol, threads=threads)
    record = JumpRecord(
        entry.lambda0,
        eps,
        delta,
        pair.gamma * (entry.m2 - entry.m1),
        entry.overlap,
        residue_sign_jump(pair, entry),
    )
    log.debug(f"jump at {entry.lambda0}: measured {delta}, predicted {record.predicted}")
    if check and not record.consistent:
        raise VerificationFailure(
            f"N_- jump {delta} at {entry.lambda0} breaks the pole rule",
            **record.to_dict(),
        )
    return record



def pole_windows(poles: list[PoleEntry], tol: Tolerances) -> list[float]:
    """``jump_window * lambda0`` per pole, shrunk below a quarter of the gap to its neighbours."""

    windows = []
    for i, entry in enumerate(poles):
        eps = tol.jump_window * entry.lambda0
        for j in (i - 1, i + 1):
            if 0 <= j < len(poles):
                eps = min(eps, abs(poles[j].lambda0 - entry.lambda0) / 4)
        windows.append(eps)
    return windows


def jump_table(
    pair: ManifoldPair,
    poles: list[PoleEntry],
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    check: bool = True,
) -> list[JumpRecord]:
    """``jump_analysis`` at every pole of a catalogue, from one grid of ``N_-`` counts.

    ``poles`` is a sorted ``pole_catalog``; windows come from ``pole_windows``."""

    if not poles:
        return []
    windows = pole_windows(poles, tol)
    edges = [x for entry, eps in zip(poles, windows) for x in (entry.lambda0 - eps, entry.lambda0 + eps)]
    counts = negative_counts(pair, edges, l_max, tol)

    records = []
    for i, (entry, eps) in enumerate(zip(poles, windows)):
        record = JumpRecord(
            entry.lambda0,
            eps,
            counts[2 * i + 1].count - counts[2 * i].count,
            pair.gamma * (entry.m2 - entry.m1),
            entry.overlap,
            residue_sign_jump(pair, entry),
        )
        if check and not record.consistent:
            raise VerificationFailure(
                f"N_- jump {record.delta} at {entry.lambda0} breaks the pole rule",
                **record.to_dict(),
            )
        records.append(record)
    log.debug(f"jumps measured at {len(records)} poles")
    return records


@dataclass(frozen=True)
class Decomposition:
    """``N_-(lambda) - N_-(alpha) = N_0 + N_pole`` and ``N_0 + N_sng <= N_T``."""

    alpha: float
    lam: float
    n_minus_alpha: int
    n_minus_lambda: int
    zero_crossings: int
    pole_jumps: int
    n_singular: int
    n_t: int
    events: tuple[tuple[float, str, int], ...] = field(default=(), repr=False)  # (lambda, kind, jump)

    @property
    def balanced(self) -> bool:
        return self.n_minus_lambda - self.n_minus_alpha == self.zero_crossings + self.pole_jumps

    @property
    def bounded(self) -> bool:
        return self.zero_crossings + self.n_singular <= self.n_t

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "lambda": self.lam,
            "N_minus_alpha": self.n_minus_alpha,
            "N_minus_lambda": self.n_minus_lambda,
            "N_0": self.zero_crossings,
            "N_pole": self.pole_jumps,
            "N_sng": self.n_singular,
            "N_T": self.n_t,
            "balanced": self.balanced,
            "bounded": self.bounded,
            "events": [list(e) for e in self.events],
        }


def _events(records: list[ITERecord], poles: list[PoleEntry], tol: Tolerances) -> list[tuple[float, str]]:
    """Pole and zero-crossing locations, sorted; a regular ITE at a pole is part of the pole event."""

    events = [(e.lambda0, "pole") for e in poles]
    for rec in records:
        if rec.kind is Kind.SINGULAR or rec.at_pole:
            continue
        if any(abs(rec.lam - e.lambda0) <= tol.degeneracy_window(rec.lam) for e in poles):
            continue
        events.append((rec.lam, "ite"))
    return sorted(events)


def decomposition(
    pair: ManifoldPair,
    alpha: float,
    lam: float,
    l_max: int,
    records: list[ITERecord],
    poles: list[PoleEntry],
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    threads: int = 1,
) -> Decomposition:
    """Split the change of ``N_-`` on ``(alpha, lam]`` into zero crossings and pole jumps.

    ``records`` and ``poles`` cover at least ``(alpha, lam]``; ``lam`` must be off
    poles. Each event gets a window of ``jump_window * lambda``, shrunk to a
    quarter of the gap to its neighbours."""

    events = [(x, kind) for x, kind in _events(records, poles, tol) if alpha < x <= lam]
    stops = [alpha] + [x for x, _ in events] + [lam]

    measured = []
    zero, pole = 0, 0
    for i, (x, kind) in enumerate(events, start=1):
        gap = min(x - stops[i - 1], stops[i + 1] - x) if stops[i + 1] > x else x - stops[i - 1]
        eps = min(tol.jump_window * x, gap / 4)
        jump = measure_jump(pair, x, eps, l_max, tol, threads=threads)
        measured.append((x, kind, jump))
        if kind == "pole":
            pole += jump
        else:
            zero += jump

    n_t = sum(r.multiplicity for r in records if alpha < r.lam <= lam)
    n_sng = sum(r.multiplicity for r in records if r.kind is Kind.SINGULAR and alpha < r.lam <= lam)
    return Decomposition(
        alpha,
        lam,
        _negatives(pair, alpha, l_max, tol, threads),
        _negatives(pair, lam, l_max, tol, threads),
        zero,
        pole,
        n_sng,
        n_t,
        tuple(measured),
    )
