"""Location and classification of interior transmission eigenvalues on an interval.

On each mode the determinant of ``Lambda_1 - Lambda_2 - zeta`` is scanned
between consecutive poles of either D-N map. Sign changes are refined with
brentq; tangential zeros are found as minima of ``|det|``. Poles themselves
are tested with the kernel convention ``Ker Q  and  Ker H``.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from itekit.cache import SpectrumCache
from itekit.common import parallel_map
from itekit.dtn import (
    certified,
    difference_mode,
    difference_sweep,
    mode_spectrum,
    MuSample,
    mu_curves,
    pole_catalog,
)
from itekit.errors import (
    AmbiguousRoot,
    EllipticRegimeViolation,
    InadmissibleAlpha,
    RootRefinementFailure,
    TruncationUncertified,
)
from itekit.logger import get_logger
from itekit.manifold import ManifoldPair, WarpedManifold, multiplicity
from itekit.radial import dirichlet_spectrum_mode, dtn_mode, phase_count
from itekit.settings import DEFAULT_TOLERANCES, Tolerances
from itekit.symbolic import tail_terms

from .records import ITERecord, Kind, merge_records

log = get_logger(__name__)

SCAN_DIVISIONS = 64
CLUSTER_SPLIT = 8
POLE_INSET = 100.0  # in pole windows


def _det(matrix: np.ndarray) -> float:
    return float(np.real(np.linalg.det(matrix)))


def zero_threshold(tol: Tolerances, *matrices: np.ndarray | None) -> float:
    """Acceptance level for a singular value: ``sqrt(root_rel) * max(1, |m1|, |m2|)``."""

    scale = 1.0
    for matrix in matrices:
        if matrix is not None and np.all(np.isfinite(matrix)):
            scale = max(scale, float(np.linalg.norm(matrix, 2)))
    return float(np.sqrt(tol.root_rel)) * scale


def _scales(pair: ManifoldPair, lam: float, l: int, tol: Tolerances) -> tuple:
    return tuple(dtn_mode(m, lam, l, tol).matrix for m in (pair.m1, pair.m2))


def _mode_poles(
    pair: ManifoldPair, l: int, b: float, tol: Tolerances, cache: SpectrumCache | None
) -> list[float]:
    found = [r.lambda0 for m in (pair.m1, pair.m2) for r in mode_spectrum(m, l, b, tol, cache)]
    return sorted(found)


def _segments(a: float, b: float, poles: list[float], tol: Tolerances, divisions: int) -> list[np.ndarray]:
    """Scan grids between consecutive poles, inset from each pole."""

    def is_pole(x: float) -> bool:
        return any(abs(p - x) <= tol.pole_window(x) for p in poles)

    inner = [p for p in poles if a + tol.pole_window(a) < p < b - tol.pole_window(b)]
    cuts = sorted(set([a] + inner + [b]))
    grids = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        inset = min(POLE_INSET * tol.pole_window(hi), (hi - lo) / (4 * divisions))
        x0 = lo + inset if is_pole(lo) else lo
        x1 = hi - inset if is_pole(hi) else hi
        if x1 > x0:
            grids.append(np.linspace(x0, x1, divisions + 1))
    return grids


def _brackets(x: np.ndarray, det: np.ndarray, det_at) -> list[tuple[float, float]]:
    """Sign-change cells, with clustered changes re-sampled ``CLUSTER_SPLIT`` times finer."""

    change = np.flatnonzero(np.sign(det[:-1]) * np.sign(det[1:]) < 0)
    clustered = set()
    for i in change:
        if i + 1 in change or i - 1 in change:
            clustered.add(int(i))

    out = []
    for i in change:
        if int(i) not in clustered:
            out.append((float(x[i]), float(x[i + 1])))
            continue
        sub = np.linspace(x[i], x[i + 1], CLUSTER_SPLIT + 1)
        values = np.array([det_at(s) for s in sub])
        for j in np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0):
            out.append((float(sub[j]), float(sub[j + 1])))
    return out


def _root_record(
    pair: ManifoldPair, l: int, lam: float, tol: Tolerances, order: int, ambiguous: bool = False
) -> ITERecord:
    sample = difference_mode(pair, lam, l, tol)
    sv = np.linalg.svd(np.real(sample.diff_matrix), compute_uv=False)
    threshold = zero_threshold(tol, *_scales(pair, lam, l, tol))
    kernel = int(np.sum(sv <= threshold))
    if kernel == 0:
        raise RootRefinementFailure(
            f"mode {l}: sign change at {lam} is not a kernel (residual {sv[-1]:.3e})",
            l=l,
            lam=lam,
            residual=float(sv[-1]),
            threshold=threshold,
        )
    mult = kernel * multiplicity(l, pair.dimension)
    return ITERecord(
        lam, Kind.REGULAR, (l,), mult, float(sv[-1]), order, per_mode=((l, mult),), ambiguous=ambiguous
    )


def touch_confirmed(det_at, lam: float, h: float, side: float) -> bool:
    """Whether ``det`` has a sign-definite quadratic touch at ``lam``.

    The second difference quotient with step ``h`` must share the sign ``side`` of
    the neighbouring values, and ``|det(lam)|`` must be negligible against it."""

    centre = det_at(lam)
    curvature = (det_at(lam + h) - 2 * centre + det_at(lam - h)) / h**2
    return bool(np.sign(curvature) == np.sign(side) and abs(centre) <= 0.1 * abs(curvature) * h**2)


def _tangential(
    pair: ManifoldPair,
    l: int,
    x: np.ndarray,
    det: np.ndarray,
    det_at,
    tol: Tolerances,
    strict: bool = False,
) -> list[ITERecord]:
    """Double zeros of the determinant between grid points.

    A near-zero without a confirmed touch is kept with ``ambiguous`` set, or
    raises AmbiguousRoot when ``strict``."""

    found = []
    magnitude = np.abs(det)
    for i in range(1, len(x) - 1):
        if not (magnitude[i] < magnitude[i - 1] and magnitude[i] < magnitude[i + 1]):
            continue
        if not (np.sign(det[i - 1]) == np.sign(det[i]) == np.sign(det[i + 1])):
            continue

        best = minimize_scalar(
            lambda s: abs(det_at(s)),
            bounds=(float(x[i - 1]), float(x[i + 1])),
            method="bounded",
            options={"xatol": tol.root_rel * max(1.0, float(x[i]))},
        )
        lam = float(best.x)
        sample = difference_mode(pair, lam, l, tol)
        sv = np.linalg.svd(np.real(sample.diff_matrix), compute_uv=False)
        if sv[-1] > zero_threshold(tol, *_scales(pair, lam, l, tol)):
            continue

        h = 1e-3 * float(x[i + 1] - x[i - 1])
        if touch_confirmed(det_at, lam, h, det[i]):
            log.debug(f"mode {l}: tangential zero at {lam}")
            found.append(_root_record(pair, l, lam, tol, order=2))
            continue
        if strict:
            raise AmbiguousRoot(
                f"mode {l}: near-zero determinant at {lam} without a quadratic touch",
                l=l,
                lam=lam,
                det=det_at(lam),
            )
        log.warning(f"mode {l}: near-zero determinant at {lam} without a quadratic touch, flagged ambiguous")
        found.append(_root_record(pair, l, lam, tol, order=2, ambiguous=True))
    return found


def _pole_kernels(pair: ManifoldPair, l: int, poles: list[float], a: float, b: float, tol: Tolerances) -> list[ITERecord]:
    """ITEs at poles under the convention ``Q f = 0`` and ``H f = 0``."""

    found = []
    for p in poles:
        if not a < p <= b:
            continue
        sample = difference_mode(pair, p, l, tol)
        if not sample.at_pole:
            continue
        stacked = np.vstack([sample.residue, np.real(sample.diff_matrix)])
        _, sv, vt = np.linalg.svd(stacked)
        v = vt[-1]
        q_res = float(np.linalg.norm(sample.residue @ v))
        h_res = float(np.linalg.norm(sample.diff_matrix @ v))
        threshold = zero_threshold(tol, sample.residue, sample.diff_matrix)
        if q_res <= threshold < h_res <= 100 * threshold:
            log.warning(f"mode {l}: approximate pole kernel at {p} (|Qv|={q_res:.3e}, |Hv|={h_res:.3e})")
        kernel = int(np.sum(sv <= threshold))
        if kernel == 0:
            continue
        mult = kernel * multiplicity(l, pair.dimension)
        found.append(
            ITERecord(
                float(sample.lambda0 or p),
                Kind.REGULAR,
                (l,),
                mult,
                float(sv[-1]),
                at_pole=True,
                pole_residuals=(q_res, h_res),
                per_mode=((l, mult),),
            )
        )
    return found


def scan_mode(
    pair: ManifoldPair,
    l: int,
    interval: tuple[float, float],
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    divisions: int = SCAN_DIVISIONS,
    cache: SpectrumCache | None = None,
    strict: bool = False,
) -> list[ITERecord]:
    """Regular ITEs of one mode in ``(a, b]``."""

    a, b = interval
    poles = _mode_poles(pair, l, b, tol, cache)
    grids = _segments(a, b, poles, tol, divisions)
    if not grids:
        return []

    sweep = difference_sweep(pair, l, np.concatenate(grids), tol)
    dets = np.real(np.linalg.det(sweep.matrices))

    def det_at(s: float) -> float:
        return _det(difference_mode(pair, s, l, tol).diff_matrix)

    records = []
    offset = 0
    for grid in grids:
        det = dets[offset : offset + len(grid)]
        offset += len(grid)
        for i in np.flatnonzero(det == 0.0):
            records.append(_root_record(pair, l, float(grid[i]), tol, order=1))
        for lo, hi in _brackets(grid, det, det_at):
            root = brentq(det_at, lo, hi, xtol=1e-3 * tol.root_rel, rtol=tol.root_rel)
            records.append(_root_record(pair, l, float(root), tol, order=1))
        records.extend(_tangential(pair, l, grid, det, det_at, tol, strict))

    records.extend(_pole_kernels(pair, l, poles, a, b, tol))
    log.debug(f"mode {l}: {len(records)} regular ITEs in ({a}, {b}]")
    return records


def mode_certified(
    pair: ManifoldPair,
    l: int,
    interval: tuple[float, float],
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    divisions: int = SCAN_DIVISIONS,
    cache: SpectrumCache | None = None,
) -> bool:
    """Whether the symbol excludes ITEs on modes ``>= l`` at every point of the mode's scan grid."""

    a, b = interval
    try:
        for component in range(pair.components):
            tail_terms(pair, b, l, component)
    except EllipticRegimeViolation:
        return False

    grids = _segments(a, b, _mode_poles(pair, l, b, tol, cache), tol, divisions)
    lambdas = np.concatenate(grids) if grids else np.array([a, b])
    curves = mu_curves(pair, l, lambdas, tol)
    for lam, values, pole in zip(curves.lambdas, curves.values, curves.is_pole):
        sample = MuSample(float(lam), l, np.sort(values), bool(pole))
        if not certified(pair, float(lam), l, sample, tol):
            return False
    return True


def mode_cutoff(
    pair: ManifoldPair,
    interval: tuple[float, float],
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    divisions: int = SCAN_DIVISIONS,
    cache: SpectrumCache | None = None,
) -> int:
    """First certified mode; modes below it are scanned."""

    for l in range(l_max + 1):
        if mode_certified(pair, l, interval, tol, divisions=divisions, cache=cache):
            return l
    raise TruncationUncertified(
        f"mode tail not certified up to l_max={l_max} on {list(interval)}",
        interval=list(interval),
        l_max=l_max,
    )


def find_regular_ites(
    pair: ManifoldPair,
    interval: tuple[float, float],
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    divisions: int = SCAN_DIVISIONS,
    cache: SpectrumCache | None = None,
    threads: int = 1,
    strict: bool = False,
) -> list[ITERecord]:
    """Regular ITEs in ``(a, b]`` over all modes, merged and sorted by ``(lambda, l)``.

    Args:
        pair (ManifoldPair): validated pair
        interval: ``(a, b)``, ``a > 0``
        l_max (int): last mode that may be scanned
        divisions (int): scan cells between consecutive poles
        strict (bool): raise AmbiguousRoot instead of flagging unconfirmed tangential zeros"""

    a, b = interval
    if b <= a:
        return []
    if a <= 0:
        raise ValueError(f"interval must start above 0, got {a}")

    cutoff = mode_cutoff(pair, interval, l_max, tol, divisions=divisions, cache=cache)
    per_mode = parallel_map(
        lambda l: scan_mode(pair, l, interval, tol, divisions=divisions, cache=cache, strict=strict),
        range(cutoff),
        threads,
    )
    return merge_records([r for found in per_mode for r in found], tol.degeneracy_window)


def find_singular_ites(
    pair: ManifoldPair,
    interval: tuple[float, float],
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    cache: SpectrumCache | None = None,
    threads: int = 1,
) -> list[ITERecord]:
    """One record per pole whose two residue ranges intersect in some mode."""

    records = []
    for entry in pole_catalog(pair, interval, l_max, tol, cache, threads):
        if entry.overlap == 0:
            continue
        gaps = [
            abs(r1.lambda0 - r2.lambda0)
            for r1 in entry.records1
            for r2 in entry.records2
            if r1.l == r2.l
        ]
        modes = tuple(sorted(set(entry.coincident_modes)))
        records.append(
            ITERecord(
                entry.lambda0,
                Kind.SINGULAR,
                modes,
                entry.overlap,
                float(max(gaps)),
                at_pole=True,
                per_mode=tuple((l, multiplicity(l, pair.dimension)) for l in modes),
            )
        )
    return records


def ite_search(
    pair: ManifoldPair,
    interval: tuple[float, float],
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    divisions: int = SCAN_DIVISIONS,
    cache: SpectrumCache | None = None,
    threads: int = 1,
    strict: bool = False,
) -> list[ITERecord]:
    """Regular and singular ITEs in ``(a, b]``."""

    regular = find_regular_ites(
        pair, interval, l_max, tol, divisions=divisions, cache=cache, threads=threads, strict=strict
    )
    singular = find_singular_ites(pair, interval, l_max, tol, cache=cache, threads=threads)
    return sorted(regular + singular, key=lambda r: (r.lam, r.modes, r.kind.value))


def first_eigenvalue(m: WarpedManifold, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Lowest Dirichlet eigenvalue; it lies in mode 0."""

    top = 1.0
    while phase_count(m, 0, top, tol) == 0:
        top *= 2.0
    return dirichlet_spectrum_mode(m, 0, top, tol)[0].lambda0


def default_alpha(pair: ManifoldPair, fraction: float = 0.5, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    return fraction * min(first_eigenvalue(pair.m1, tol), first_eigenvalue(pair.m2, tol))


def check_alpha(pair: ManifoldPair, alpha: float, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``alpha`` unchanged if ``0 < alpha < min(first eigenvalues)``, else InadmissibleAlpha."""

    bound = min(first_eigenvalue(pair.m1, tol), first_eigenvalue(pair.m2, tol))
    if not 0 < alpha < bound:
        raise InadmissibleAlpha(
            f"alpha={alpha} must lie in (0, {bound})",
            alpha=alpha,
            first_eigenvalue=bound,
        )
    return alpha


def counting_function(
    pair: ManifoldPair,
    alpha: float,
    lam: float,
    l_max: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    records: list[ITERecord] | None = None,
    cache: SpectrumCache | None = None,
    threads: int = 1,
) -> int:
    """``N_T(lambda)``: ITEs in ``(alpha, lambda]`` counted with multiplicity.

    Pass ``records`` from an earlier ``ite_search`` over a larger interval to
    avoid searching again."""

    check_alpha(pair, alpha, tol)
    if lam <= alpha:
        return 0
    if records is None:
        records = ite_search(pair, (alpha, lam), l_max, tol, cache=cache, threads=threads)
    return sum(r.multiplicity for r in records if alpha < r.lam <= lam)


def evaluate_off_axis(
    pair: ManifoldPair,
    lam: complex,
    l: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Smallest singular value of the mode-``l`` difference at complex ``lam``."""

    sample = difference_mode(pair, complex(lam), l, tol)
    return float(np.linalg.svd(sample.diff_matrix, compute_uv=False)[-1])
