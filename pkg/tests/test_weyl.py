import numpy as np
import pytest
from scipy.special import jn_zeros

from itekit.dtn import pole_catalog
from itekit.errors import NotAnEigenvalue, TruncationUncertified
from itekit.ite import default_alpha, ite_search
from itekit.manifold import multiplicity
from itekit.weyl import (
    decomposition,
    dirichlet_counting,
    dirichlet_counts,
    jump_analysis,
    jump_table,
    pole_windows,
    residue_sign_jump,
    sphere_area,
    unit_ball_volume,
    verify_lower_bound,
    weyl_constant,
    weyl_constant_literal,
    weyl_fit,
)

from .conftest import disk


def disk_count(lam, l_max=60):
    total = 0
    for l in range(l_max + 1):
        zeros = jn_zeros(l, 40) ** 2
        found = int(np.sum(zeros <= lam))
        if found == 0:
            break
        total += found * multiplicity(l, 2)
    return total


def cylinder_count(lam):
    """``#{(j, l) : j >= 1, l in Z, j^2 + l^2 <= lam}``."""

    top = int(np.floor(np.sqrt(lam)))
    return sum(int(np.floor(np.sqrt(lam - l * l))) for l in range(-top, top + 1))


class TestConstants:
    # Tests the ball volumes and sphere areas of low dimensions
    def test_ball(self):
        assert unit_ball_volume(2) == pytest.approx(np.pi)
        assert unit_ball_volume(3) == pytest.approx(4 * np.pi / 3)
        assert sphere_area(2) == pytest.approx(2 * np.pi)
        assert sphere_area(3) == pytest.approx(4 * np.pi)

    # Tests that the unit disk has V = 1/4
    def test_disk(self, unit_disk):
        assert weyl_constant(unit_disk) == pytest.approx(0.25, rel=1e-8)
        assert weyl_constant_literal(unit_disk) == pytest.approx(1 / 6, rel=1e-8)

    # Tests that the flat cylinder has V = area / (4 pi) = pi / 2
    def test_cylinder(self, flat_cylinder):
        assert weyl_constant(flat_cylinder) == pytest.approx(np.pi / 2, rel=1e-8)

    # Tests that scaling the index by c scales V by c^(d/2)
    @pytest.mark.parametrize("dimension", [2, 3])
    @pytest.mark.parametrize("c", [2, 4, 9])
    def test_scaling(self, dimension, c):
        base = weyl_constant(disk((1,), dimension=dimension))
        assert weyl_constant(disk((c,), dimension=dimension)) == pytest.approx(c ** (dimension / 2) * base, rel=1e-8)


class TestCounting:
    # Tests the cylinder count j^2 + l^2 <= 10
    def test_cylinder(self, flat_cylinder, tol):
        assert dirichlet_counting(flat_cylinder, 10.0, 12, tol) == 15

    # Tests the disk count against an enumeration of Bessel zeros
    @pytest.mark.parametrize("lam", [6.0, 30.0, 75.0])
    def test_disk(self, unit_disk, tol, lam):
        assert dirichlet_counting(unit_disk, lam, 40, tol) == disk_count(lam)

    # Tests that counts on a grid are monotone
    def test_grid(self, unit_disk, tol):
        counts = dirichlet_counts(unit_disk, np.linspace(1.0, 60.0, 12), 40, tol)
        assert list(counts) == sorted(counts)
        assert counts[0] == 0

    # Tests that too few modes are reported
    def test_truncation(self, unit_disk, tol):
        with pytest.raises(TruncationUncertified):
            dirichlet_counting(unit_disk, 75.0, 2, tol)

    # Tests that the fitted ratio approaches V on the disk up to lambda = 2000
    @pytest.mark.slow
    def test_fit(self, unit_disk, tol):
        fit = weyl_fit(unit_disk, np.linspace(200.0, 2000.0, 19), 60, tol)
        assert fit.constant == pytest.approx(0.25)
        assert fit.counts[-1] == disk_count(2000.0)
        assert abs(fit.ratios[-1] - 0.25) < 0.03
        assert fit.c_fit < 2.0
        assert len(fit.to_dict()["rows"]) == 19

    # Tests that the cylinder ratio approaches pi / 2 with the lattice count
    @pytest.mark.slow
    def test_fit_cylinder(self, flat_cylinder, tol):
        grid = np.linspace(200.5, 2000.5, 19)
        fit = weyl_fit(flat_cylinder, grid, 50, tol)
        assert fit.constant == pytest.approx(np.pi / 2, rel=1e-8)
        assert list(fit.counts) == [cylinder_count(lam) for lam in grid]
        assert abs(fit.ratios[-1] - np.pi / 2) < 0.05
        assert fit.c_fit < 3.0


class TestJumps:
    # Tests that the first pole of the denser cylinder raises N_- by one
    def test_first_pole(self, cylinder_pair, tol):
        record = jump_analysis(cylinder_pair, 0.25, 12, tol)
        assert record.delta == 1
        assert record.predicted == 1
        assert record.residue_jump == 1
        assert record.consistent

    # Tests the common pole at lambda = 1 with orthogonal residues
    def test_common_pole(self, cylinder_pair, tol):
        record = jump_analysis(cylinder_pair, 1.0, 12, tol)
        assert record.overlap == 0
        assert record.predicted == 0
        assert record.consistent

    # Tests that the residue-sign rule matches the catalogue multiplicities
    def test_residue_sign(self, cylinder_pair, tol):
        for entry in pole_catalog(cylinder_pair, (0.1, 1.5), 12, tol):
            if entry.overlap == 0:
                assert residue_sign_jump(cylinder_pair, entry) == cylinder_pair.gamma * (entry.m2 - entry.m1)

    # Tests the jump rule at every cylinder pole up to lambda = 20
    @pytest.mark.slow
    def test_table(self, cylinder_pair, tol):
        alpha = default_alpha(cylinder_pair, 0.5, tol)
        poles = pole_catalog(cylinder_pair, (alpha, 20.0), 40, tol)
        records = jump_table(cylinder_pair, poles, 40, tol, check=False)
        assert len(records) == len(poles) > 20
        for record in records:
            assert record.consistent, record.to_dict()
            if record.overlap == 0:
                assert record.delta == record.predicted
                assert record.residue_jump == record.delta
        common = next(r for r in records if r.lambda0 == pytest.approx(1.0))
        assert abs(common.delta - common.predicted) <= 1

    # Tests that jump windows stay inside the gap to neighbouring poles
    def test_windows(self, cylinder_pair, tol):
        poles = pole_catalog(cylinder_pair, (0.1, 1.5), 12, tol)
        windows = pole_windows(poles, tol)
        assert windows[0] == pytest.approx(tol.jump_window * poles[0].lambda0)
        for (a, b), eps in zip(zip(poles, poles[1:]), windows):
            assert eps <= (b.lambda0 - a.lambda0) / 4

    # Tests that a jump table agrees with single-pole analysis
    def test_table_matches_analysis(self, cylinder_pair, tol):
        poles = pole_catalog(cylinder_pair, (0.1, 1.5), 12, tol)
        for record in jump_table(cylinder_pair, poles, 12, tol):
            single = jump_analysis(cylinder_pair, record.lambda0, 12, tol, eps=record.eps)
            assert single.delta == record.delta

    # Tests that a regular point has no jump analysis
    def test_not_a_pole(self, cylinder_pair, tol):
        with pytest.raises(NotAnEigenvalue):
            jump_analysis(cylinder_pair, 0.6, 12, tol)

    # Tests that N_- changes only at poles and zero crossings
    def test_decomposition(self, cylinder_pair, tol):
        alpha, top = 0.1, 1.5
        records = ite_search(cylinder_pair, (alpha, top), 12, tol)
        poles = pole_catalog(cylinder_pair, (alpha, top), 12, tol)
        split = decomposition(cylinder_pair, alpha, top, 12, records, poles, tol)
        assert split.balanced
        assert split.bounded
        assert split.to_dict()["N_pole"] == split.pole_jumps


class TestLowerBound:
    # Tests the lower bound on the cylinder pair with jumps measured
    def test_cylinder(self, cylinder_pair, tol):
        report = verify_lower_bound(cylinder_pair, 0.1, np.linspace(0.2, 1.5, 6), 12, tol, with_jumps=True)
        assert not report.failures
        assert all(j.consistent for j in report.jumps)
        assert report.predicted_slope == pytest.approx(-3 * np.pi / 2, rel=1e-8)

    # Tests that grid points at or below alpha are refused
    def test_grid_below_alpha(self, cylinder_pair, tol):
        with pytest.raises(ValueError):
            verify_lower_bound(cylinder_pair, 0.1, [0.05, 0.1], 12, tol)

    # Tests the crossing pair over the acceptance range with the decomposition
    @pytest.mark.slow
    def test_crossing_decomposition(self, crossing_pair, tol):
        alpha = default_alpha(crossing_pair, 0.5, tol)
        grid = np.linspace(2.0, 20.0, 10)
        report = verify_lower_bound(crossing_pair, alpha, grid, 40, tol, with_decomposition=True)
        assert all(row.slack >= 0 for row in report.rows)
        assert report.decomposition.balanced
        assert report.to_dict()["gamma"] == crossing_pair.gamma

    # Tests that the crossing pair count grows linearly up to lambda = 500
    @pytest.mark.slow
    def test_crossing_slope(self, crossing_pair, tol):
        alpha = default_alpha(crossing_pair, 0.5, tol)
        report = verify_lower_bound(crossing_pair, alpha, np.linspace(5.0, 500.0, 100), 120, tol)
        assert not report.failures
        assert report.predicted_slope == pytest.approx(0.05, rel=1e-6)
        slope, _ = report.fit()
        assert slope >= 0.03
