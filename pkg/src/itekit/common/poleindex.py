from __future__ import annotations

import typing

from sortedcontainers import SortedDict


class PoleIndex(SortedDict):
    """Sorted map from a spectral parameter to the entries found there.

    Keys closer than a relative window are the same point: ``add`` files an
    entry under the nearest existing key when it lies within the window."""

    def __init__(self, window: typing.Callable[[float], float]) -> None:
        super().__init__()
        self.window = window

    def nearest(self, lam: float) -> float | None:
        """Closest key to ``lam``, or None when empty."""

        if not self:
            return None
        pos = self.bisect_left(lam)
        keys = self.keys()
        candidates = [keys[i] for i in (pos - 1, pos) if 0 <= i < len(keys)]
        return min(candidates, key=lambda k: abs(k - lam))

    def add(self, lam: float, entry: typing.Any) -> float:
        """File ``entry`` at ``lam`` and return the key used."""

        key = self.nearest(lam)
        if key is None or abs(key - lam) > self.window(max(abs(key), abs(lam))):
            key = lam
            super().__setitem__(key, [])
        self[key].append(entry)
        return key

    def between(self, lo: float, hi: float, inclusive: tuple[bool, bool] = (False, True)):
        """``(key, entries)`` pairs with ``lo < key <= hi`` by default."""

        for key in self.irange(lo, hi, inclusive=inclusive):
            yield key, self[key]
