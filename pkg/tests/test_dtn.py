import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jn_zeros

from itekit.dtn import (
    certified,
    count_negative,
    difference_mode,
    difference_sweep,
    manifold_spectrum,
    mode_weights,
    mu_curves,
    mu_mode,
    negative_counts,
    pole_catalog,
)
from itekit.errors import PoleProximity, TruncationUncertified
from itekit.radial import regular_part

from .test_radial import disk_dtn, interval_dtn


class TestDifference:
    # Tests that off poles the difference is the plain difference of Bessel quotients
    @pytest.mark.parametrize("l", [0, 2, 6])
    def test_disk(self, disk_pair, tol, l):
        sample = difference_mode(disk_pair, 1.7, l, tol)
        assert not sample.at_pole
        assert sample.residue is None
        expected = disk_dtn(1.7, l, 1.0) - disk_dtn(1.7, l, 2.0)
        assert sample.diff_matrix[0, 0] == pytest.approx(expected, rel=1e-8)

    # Tests that zeta is subtracted on every boundary component
    def test_zeta(self, cylinder_pair, zeta_pair, tol):
        plain = difference_mode(cylinder_pair, 0.6, 1, tol).diff_matrix
        shifted = difference_mode(zeta_pair, 0.6, 1, tol).diff_matrix
        assert shifted == pytest.approx(plain - 0.5 * np.eye(2), rel=1e-12)

    # Tests that a pole of one manifold gives its regular part and residue
    def test_at_pole(self, disk_pair, unit_disk, tol):
        lam0 = jn_zeros(0, 1)[0] ** 2
        sample = difference_mode(disk_pair, lam0, 0, tol)
        assert sample.pole_flags == (True, False)
        assert sample.lambda0 == pytest.approx(lam0, rel=1e-10)
        assert sample.residue[0, 0] == pytest.approx(-2 * lam0, rel=1e-7)
        expected = regular_part(unit_disk, lam0, 0, tol)[0, 0] - disk_dtn(lam0, 0, 2.0)
        assert sample.diff_matrix[0, 0] == pytest.approx(expected, rel=1e-8)

    # Tests that the sweep marks poles with NaN and matches pointwise values elsewhere
    def test_sweep(self, cylinder_pair, tol):
        grid = np.array([0.4, 1.0, 1.6])
        sweep = difference_sweep(cylinder_pair, 0, grid, tol)
        assert list(sweep.pole_flags.any(axis=1)) == [False, True, False]
        assert np.all(np.isnan(sweep.matrices[1]))
        expected = interval_dtn(1.6, 0, 1.0) - interval_dtn(1.6, 0, 4.0)
        assert sweep.matrices[2] == pytest.approx(expected, rel=1e-7)


class TestCatalog:
    # Tests that the cylinder pair shares lambda = 1 on mode 0 with orthogonal data
    def test_cylinder(self, cylinder_pair, tol):
        entries = pole_catalog(cylinder_pair, (0.5, 1.5), 12, tol)
        assert [e.lambda0 for e in entries] == pytest.approx([1.0, 1.25], rel=1e-9)
        common, later = entries
        assert (common.m1, common.m2, common.overlap) == (1, 1, 0)
        assert common.coincident_modes == (0,)
        assert (later.m1, later.m2) == (0, 4)
        assert later.modes == (1, 2)

    # Tests that parallel boundary data counts as overlap
    def test_overlap(self, overlap_pair, tol):
        entries = pole_catalog(overlap_pair, (0.9, 1.1), 12, tol)
        assert len(entries) == 1
        assert entries[0].overlap == 1
        assert entries[0].to_dict()["coincident_modes"] == [0]

    # Tests that windows without poles and reversed intervals are empty
    def test_empty(self, cylinder_pair, tol):
        assert pole_catalog(cylinder_pair, (1.05, 1.2), 12, tol) == []
        assert pole_catalog(cylinder_pair, (2.0, 1.0), 12, tol) == []

    # Tests that poles below the window are scanned but not listed
    def test_window(self, cylinder_pair, tol):
        entries = pole_catalog(cylinder_pair, (1.1, 1.3), 12, tol)
        assert [e.lambda0 for e in entries] == pytest.approx([1.25], rel=1e-9)
        assert entries[0].modes == (1, 2)

    # Tests that the spectrum scan stops at the first empty mode
    def test_manifold_spectrum(self, flat_cylinder, tol):
        records = manifold_spectrum(flat_cylinder, 5.0, 12, tol)
        assert sorted(r.lambda0 for r in records) == pytest.approx([1.0, 2.0, 4.0, 5.0, 5.0], rel=1e-9)


class TestMu:
    # Tests that mode 0 of a unit disk has unit weight and mu = gamma (m1 - m2)
    def test_mode_zero(self, disk_pair, tol):
        assert mode_weights(disk_pair, 0) == pytest.approx([1.0])
        sample = mu_mode(disk_pair, 1.7, 0, tol)
        assert sample.values[0] == pytest.approx(disk_dtn(1.7, 0, 1.0) - disk_dtn(1.7, 0, 2.0), rel=1e-8)

    # Tests that the negative count does not depend on a positive rescaling of W
    @given(st.floats(min_value=1e-3, max_value=1e3), st.integers(min_value=0, max_value=8))
    @settings(deadline=None, max_examples=20)
    def test_scale_invariance(self, disk_pair, tol, scale, l):
        assert mu_mode(disk_pair, 3.2, l, tol, scale).negatives == mu_mode(disk_pair, 3.2, l, tol).negatives

    # Tests that poles give NaN values
    def test_pole(self, cylinder_pair, tol):
        sample = mu_mode(cylinder_pair, 1.0, 0, tol)
        assert sample.is_pole
        assert np.all(np.isnan(sample.values))

    # Tests that matched curves carry the pointwise eigenvalues
    def test_curves(self, cylinder_pair, tol):
        grid = np.linspace(0.3, 0.9, 13)
        curves = mu_curves(cylinder_pair, 0, grid, tol)
        assert not curves.is_pole.any()
        for i in (0, 6, 12):
            assert sorted(curves.values[i]) == pytest.approx(list(mu_mode(cylinder_pair, grid[i], 0, tol).values), rel=1e-8)
        assert np.isfinite(curves.max_jump())

    # Tests that high modes are certified and mode 0 is not
    def test_certified(self, disk_pair, tol):
        assert certified(disk_pair, 1.0, 40, mu_mode(disk_pair, 1.0, 40, tol), tol)
        assert not certified(disk_pair, 1.0, 0, mu_mode(disk_pair, 1.0, 0, tol), tol)


class TestNegativeCount:
    # Tests that N_- vanishes below the first pole
    def test_below_poles(self, disk_pair, tol):
        result = count_negative(disk_pair, 1.0, 12, tol)
        assert result.count == 0
        assert result.l_star <= 12

    # Tests that the first pole of the second disk adds one negative value
    def test_after_pole(self, disk_pair, tol):
        result = count_negative(disk_pair, 3.2, 12, tol)
        assert result.count == 1
        assert result.per_mode[0][:2] == (0, 1)

    # Tests that thread count does not change the result
    def test_threads(self, disk_pair, tol):
        assert count_negative(disk_pair, 3.2, 12, tol, threads=3).count == count_negative(disk_pair, 3.2, 12, tol).count

    # Tests that a pole refuses to be counted
    def test_pole(self, cylinder_pair, tol):
        with pytest.raises(PoleProximity):
            count_negative(cylinder_pair, 1.0, 12, tol)

    # Tests that too few modes leave the tail uncertified
    def test_truncation(self, disk_pair, tol):
        with pytest.raises(TruncationUncertified):
            count_negative(disk_pair, 3.2, 1, tol)

    # Tests that lambda must be positive
    def test_positive(self, disk_pair, tol):
        with pytest.raises(ValueError):
            count_negative(disk_pair, 0.0, 12, tol)

    # Tests that the grid count matches single-point counts
    def test_grid(self, disk_pair, tol):
        grid = [1.0, 3.2, 6.5, 12.0]
        for one, single in zip(negative_counts(disk_pair, grid, 12, tol), grid):
            expected = count_negative(disk_pair, single, 12, tol)
            assert (one.count, one.l_star, one.per_mode) == (expected.count, expected.l_star, expected.per_mode)

    # Tests that a grid touching a pole is refused
    def test_grid_pole(self, cylinder_pair, tol):
        with pytest.raises(PoleProximity):
            negative_counts(cylinder_pair, [0.6, 1.0], 12, tol)
        with pytest.raises(TruncationUncertified):
            negative_counts(cylinder_pair, [0.6, 1.5], 0, tol)
