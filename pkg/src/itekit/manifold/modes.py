from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np


def kappa(l: int, d: int) -> int:
    """Eigenvalue ``l(l + d - 2)`` of the sphere Laplacian on ``S^{d-1}``."""

    return l * (l + d - 2)


def multiplicity(l: int, d: int) -> int:
    """Dimension of the degree-``l`` spherical harmonics on ``S^{d-1}``."""

    if l == 0:
        return 1
    if d == 2:
        return 2
    # (2l+d-2)(l+d-3)! / (l!(d-2)!)
    return (2 * l + d - 2) * comb(l + d - 3, l) // (d - 2)


@dataclass(frozen=True)
class Mode:
    l: int
    kappa: int
    mult: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.l, self.kappa, self.mult)


@dataclass(frozen=True)
class ModeFamily:
    """Transversal modes ``l = 0..l_max`` of the cross-section ``S^{d-1}``."""

    dimension: int
    entries: tuple[Mode, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, l: int) -> Mode:
        return self.entries[l]

    def total(self) -> int:
        return sum(m.mult for m in self.entries)


def mode_family(d: int, l_max: int) -> ModeFamily:
    """Modes ``(l, kappa_l, mult_l)`` for ``l = 0..l_max``.

    Args:
        d (int): manifold dimension, ``>= 2``
        l_max (int): last mode, ``>= 0``"""

    if d < 2 or l_max < 0:
        raise ValueError(f"mode_family needs d >= 2 and l_max >= 0, got {d}, {l_max}")
    return ModeFamily(
        d, tuple(Mode(l, kappa(l, d), multiplicity(l, d)) for l in range(l_max + 1))
    )


def indicial_roots(l: int, d: int) -> tuple[float, float]:
    """Roots of ``s(s-1) + (d-1)s - kappa_l`` at a smooth cap; ``l`` is the regular one."""

    k = kappa(l, d)
    b = d - 2
    disc = np.sqrt(b * b + 4 * k)
    return ((-b + disc) / 2, (-b - disc) / 2)
