from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from itekit.common import PoleIndex


class Kind(Enum):
    REGULAR = "regular"
    SINGULAR = "singular"


@dataclass(frozen=True)
class ITERecord:
    """One interior transmission eigenvalue.

    ``residual`` is the smallest singular value reached at the root. Records
    found through the pole-kernel convention also carry ``pole_residuals``
    ``(|Q v|, |H v|)``. ``order`` is 2 for a tangential zero of the determinant;
    ``ambiguous`` marks a near-zero that passed the singular-value test without a
    confirmed quadratic touch."""

    lam: float
    kind: Kind
    modes: tuple[int, ...]
    multiplicity: int
    residual: float
    order: int = 1
    at_pole: bool = False
    pole_residuals: tuple[float, float] | None = None
    per_mode: tuple[tuple[int, int], ...] = field(default=())  # (l, multiplicity)
    ambiguous: bool = False

    def sort_key(self) -> tuple:
        return (self.lam, self.modes)

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "kind": self.kind.value,
            "modes": list(self.modes),
            "multiplicity": self.multiplicity,
            "residual": self.residual,
            "order": self.order,
            "at_pole": self.at_pole,
            "pole_residuals": None if self.pole_residuals is None else list(self.pole_residuals),
            "ambiguous": self.ambiguous,
        }


def merge_records(records: list[ITERecord], window) -> list[ITERecord]:
    """Combine records of the same kind lying within ``window(lambda)`` of each other.

    Output is sorted by ``(lambda, modes)`` whatever the input order."""

    merged = []
    for kind in Kind:
        index = PoleIndex(window)
        for rec in sorted((r for r in records if r.kind is kind), key=ITERecord.sort_key):
            index.add(rec.lam, rec)
        for key, group in index.items():
            if len(group) == 1:
                merged.append(group[0])
                continue
            per_mode = tuple(sorted(pm for r in group for pm in r.per_mode))
            merged.append(
                ITERecord(
                    lam=group[0].lam,
                    kind=kind,
                    modes=tuple(sorted({l for r in group for l in r.modes})),
                    multiplicity=sum(r.multiplicity for r in group),
                    residual=max(r.residual for r in group),
                    order=max(r.order for r in group),
                    at_pole=any(r.at_pole for r in group),
                    pole_residuals=next((r.pole_residuals for r in group if r.pole_residuals), None),
                    per_mode=per_mode,
                    ambiguous=any(r.ambiguous for r in group),
                )
            )
    return sorted(merged, key=lambda r: (r.lam, r.kind.value, r.modes))
