import numpy as np
import pytest
from scipy.optimize import brentq
from scipy.special import jn_zeros, jv, jvp

from itekit.dtn import mode_weights, mu_mode
from itekit.errors import AmbiguousRoot, InadmissibleAlpha
from itekit.ite import (
    SCAN_DIVISIONS,
    ITERecord,
    Kind,
    check_alpha,
    counting_function,
    default_alpha,
    evaluate_off_axis,
    find_regular_ites,
    find_singular_ites,
    first_eigenvalue,
    ite_search,
    merge_records,
    mode_certified,
    scan_mode,
    touch_confirmed,
)
from itekit.ite import search


def disk_ite_equation(lam, l=0, n1=1.0, n2=2.0):
    """Cross-multiplied transmission condition for constant indices on the unit disk."""

    k1, k2 = np.sqrt(lam * n1), np.sqrt(lam * n2)
    return k1 * jvp(l, k1) * jv(l, k2) - k2 * jvp(l, k2) * jv(l, k1)


def disk_ites(a, b, l=0):
    grid = np.linspace(a, b, 4001)
    values = disk_ite_equation(grid, l)
    return [
        brentq(disk_ite_equation, grid[i], grid[i + 1], args=(l,), xtol=1e-14)
        for i in np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    ]


class TestScan:
    # Tests that mode 0 of the disk pair matches the Bessel transmission condition
    @pytest.mark.parametrize("l", [0, 1])
    def test_disk_modes(self, disk_pair, tol, l):
        found = scan_mode(disk_pair, l, (0.05, 40.0), tol)
        assert [r.lam for r in found] == pytest.approx(disk_ites(0.05, 40.0, l), rel=1e-7)
        assert all(r.kind is Kind.REGULAR and r.order == 1 for r in found)

    # Tests that the flat cylinder pair has no mode-0 ITE in (0.05, 2]
    def test_cylinder_mode_zero(self, cylinder_pair, tol):
        assert scan_mode(cylinder_pair, 0, (0.05, 2.0), tol) == []

    # Tests that circle modes past 0 carry multiplicity 2
    def test_multiplicity(self, disk_pair, tol):
        found = scan_mode(disk_pair, 1, (0.05, 40.0), tol)
        assert {r.multiplicity for r in found} <= {2}

    # Tests that an empty or reversed interval has no ITEs and a non-positive start is refused
    def test_interval(self, disk_pair, tol):
        assert find_regular_ites(disk_pair, (2.0, 1.0), 12, tol) == []
        with pytest.raises(ValueError):
            find_regular_ites(disk_pair, (0.0, 1.0), 12, tol)

    # Tests that swapping the pair keeps the ITEs
    def test_swap(self, disk_pair, tol):
        one = ite_search(disk_pair, (0.05, 8.0), 12, tol)
        two = ite_search(disk_pair.swapped(), (0.05, 8.0), 12, tol)
        assert [r.lam for r in one] == pytest.approx([r.lam for r in two], rel=1e-8)
        assert [r.multiplicity for r in one] == [r.multiplicity for r in two]

    # Tests that off-axis evaluation is the modulus of the complex Bessel difference
    def test_off_axis(self, disk_pair, tol):
        lam = 5.0 + 2.0j
        k1, k2 = np.sqrt(lam), np.sqrt(2 * lam)
        one = k1 * (jv(-1, k1) - jv(1, k1)) / 2 / jv(0, k1)
        two = k2 * (jv(-1, k2) - jv(1, k2)) / 2 / jv(0, k2)
        assert evaluate_off_axis(disk_pair, lam, 0, tol) == pytest.approx(abs(one - two), rel=1e-6)


class TestSingular:
    # Tests that parallel residue data at lambda = 1 gives a singular ITE
    def test_overlap(self, overlap_pair, tol):
        found = find_singular_ites(overlap_pair, (0.9, 1.1), 12, tol)
        assert len(found) == 1
        assert found[0].kind is Kind.SINGULAR
        assert found[0].lam == pytest.approx(1.0, rel=1e-9)
        assert found[0].modes == (0,)
        assert found[0].multiplicity == 1

    # Tests that orthogonal residue data gives no singular ITE
    def test_no_overlap(self, cylinder_pair, tol):
        assert find_singular_ites(cylinder_pair, (0.9, 1.1), 12, tol) == []


class TestRecords:
    # Tests that nearby records of one kind merge and sum multiplicities
    def test_merge(self, tol):
        a = ITERecord(2.0, Kind.REGULAR, (1,), 2, 1e-12, per_mode=((1, 2),))
        b = ITERecord(2.0 + 1e-12, Kind.REGULAR, (3,), 2, 1e-11, per_mode=((3, 2),))
        c = ITERecord(2.0, Kind.SINGULAR, (0,), 1, 0.0)
        merged = merge_records([b, c, a], tol.degeneracy_window)
        assert len(merged) == 2
        regular = next(r for r in merged if r.kind is Kind.REGULAR)
        assert regular.modes == (1, 3)
        assert regular.multiplicity == 4
        assert regular.residual == 1e-11

    # Tests that records serialize with their kind
    def test_to_dict(self):
        data = ITERecord(1.5, Kind.REGULAR, (0,), 1, 1e-10).to_dict()
        assert data["kind"] == "regular"
        assert data["pole_residuals"] is None
        assert data["ambiguous"] is False


class TestTangential:
    # Tests that a quadratic touch is confirmed and a lifted or wrong-sided one is not
    def test_touch(self):
        assert touch_confirmed(lambda s: (s - 1.0) ** 2, 1.0, 1e-3, 1.0)
        assert not touch_confirmed(lambda s: (s - 1.0) ** 2 + 1e-3, 1.0, 1e-3, 1.0)
        assert not touch_confirmed(lambda s: -((s - 1.0) ** 2), 1.0, 1e-3, 1.0)

    # Tests that an unconfirmed near-zero is flagged, or raised when strict
    def test_ambiguous(self, disk_pair, tol, monkeypatch):
        monkeypatch.setattr(search, "zero_threshold", lambda tol, *m: 1e300)
        x = np.linspace(1.0, 2.0, 11)

        def det_at(s):
            return (s - 1.5) ** 2 + 0.5

        found = search._tangential(disk_pair, 0, x, det_at(x), det_at, tol)
        assert len(found) == 1
        assert found[0].ambiguous
        assert found[0].order == 2
        assert found[0].lam == pytest.approx(1.5, rel=1e-6)
        with pytest.raises(AmbiguousRoot):
            search._tangential(disk_pair, 0, x, det_at(x), det_at, tol, strict=True)

    # Tests that a flagged root does not stop the search of other modes
    def test_search_continues(self, disk_pair, tol, monkeypatch):
        tangential = search._tangential
        flagged = ITERecord(33.3, Kind.REGULAR, (1,), 2, 0.0, 2, per_mode=((1, 2),), ambiguous=True)

        def with_flag(pair, l, x, det, det_at, tol, strict=False):
            found = tangential(pair, l, x, det, det_at, tol, strict)
            if l == 1 and x[0] <= flagged.lam <= x[-1]:
                found.append(flagged)
            return found

        monkeypatch.setattr(search, "_tangential", with_flag)
        found = ite_search(disk_pair, (0.05, 40.0), 40, tol)
        mode_zero = [r.lam for r in found if r.modes == (0,)]
        assert mode_zero == pytest.approx(disk_ites(0.05, 40.0, 0), rel=1e-7)
        assert [r.lam for r in found if r.ambiguous] == [33.3]


class TestCertificate:
    # Tests that the tail certificate is checked at every scan grid point
    def test_grid(self, disk_pair, tol, monkeypatch):
        seen = []
        real = search.certified

        def counting(pair, lam, l, sample, tol):
            seen.append(lam)
            return real(pair, lam, l, sample, tol)

        monkeypatch.setattr(search, "certified", counting)
        assert mode_certified(disk_pair, 40, (0.05, 8.0), tol, divisions=16)
        assert seen == pytest.approx(list(np.linspace(0.05, 8.0, 17)))
        assert not mode_certified(disk_pair, 0, (0.05, 8.0), tol, divisions=16)

    # Tests that one failing interior point withholds the certificate
    def test_interior_failure(self, disk_pair, tol, monkeypatch):
        middle = np.linspace(0.05, 8.0, 17)[8]
        monkeypatch.setattr(search, "certified", lambda pair, lam, l, sample, tol: abs(lam - middle) > 1e-9)
        assert not mode_certified(disk_pair, 40, (0.05, 8.0), tol, divisions=16)


class TestStability:
    # Tests that a finer scan and more modes find the same ITEs
    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["disk_pair", "cylinder_pair"])
    def test_refinement(self, request, tol, name):
        pair = request.getfixturevalue(name)
        interval = (default_alpha(pair, 0.5, tol), 100.0)

        def summary(records):
            return [(r.multiplicity, r.kind, r.modes) for r in records]

        base = ite_search(pair, interval, 60, tol)
        finer = ite_search(pair, interval, 60, tol, divisions=2 * SCAN_DIVISIONS)
        wider = ite_search(pair, interval, 65, tol)
        for other in (finer, wider):
            assert [r.lam for r in other] == pytest.approx([r.lam for r in base], rel=1e-8)
            assert summary(other) == summary(base)


class TestCounting:
    # Tests that the default alpha is half the lowest Dirichlet eigenvalue
    def test_default_alpha(self, disk_pair, tol):
        lowest = jn_zeros(0, 1)[0] ** 2 / 2
        assert first_eigenvalue(disk_pair.m2, tol) == pytest.approx(lowest, rel=1e-8)
        assert default_alpha(disk_pair, 0.5, tol) == pytest.approx(lowest / 2, rel=1e-8)

    # Tests that alpha must lie below both first eigenvalues
    @pytest.mark.parametrize("alpha", [0.0, -1.0, 3.0, 10.0])
    def test_inadmissible(self, disk_pair, tol, alpha):
        with pytest.raises(InadmissibleAlpha):
            check_alpha(disk_pair, alpha, tol)

    # Tests that N_T is monotone and zero below the first ITE
    @pytest.mark.slow
    def test_monotone(self, disk_pair, tol):
        alpha = 1.0
        records = ite_search(disk_pair, (alpha, 40.0), 40, tol)
        grid = np.linspace(1.5, 40.0, 20)
        counts = [counting_function(disk_pair, alpha, lam, 12, tol, records=records) for lam in grid]
        assert counts == sorted(counts)
        assert counting_function(disk_pair, alpha, 0.5, 12, tol) == 0
        if records:
            below = records[0].lam * (1 - 1e-6)
            assert counting_function(disk_pair, alpha, below, 12, tol, records=records) == 0
            assert counts[-1] == sum(r.multiplicity for r in records)


class TestZeta:
    # Tests that the zeta branch weights with s = 0 and certifies large modes
    def test_weights(self, zeta_pair, tol):
        assert zeta_pair.s == 0
        assert mode_weights(zeta_pair, 3) == pytest.approx([np.sqrt(10.0)] * 2)
        assert mu_mode(zeta_pair, 1.0, 30, tol).negatives == 0

    # Tests that a constant zeta on both circles gives a finite, sorted ITE list
    def test_search(self, zeta_pair, tol):
        found = ite_search(zeta_pair, (0.05, 1.0), 40, tol)
        assert [r.lam for r in found] == sorted(r.lam for r in found)
        assert all(0.05 < r.lam <= 1.0 for r in found)
