"""
test: tests/unit/test_pod_unit.py

Unit tests for the POD basis in `app.services.rom.pod`.

Test Suites:
1. TestDecompose: SVD wrapper, signs and numerical rank.
2. TestBuildBasis: Truncation, validation and rank deficiency.
3. TestVariance: Information variance and mode counts.
4. TestModeAgreement: Comparison of sampled and full bases.
5. TestProjectionProperties: Projection optimality and spectrum dominance.
"""

import warnings

import numpy as np
import pytest

from app.models.arrays import Sinogram, SnapshotDatabase
from app.services.rom.pod import (
    build_basis,
    decompose,
    information_variance,
    mode_agreement,
    modes_for_variance,
    spectrum_basis,
)
from app.services.rom.snapshots import sample_views
from app.utility.errors import ConfigurationError, NumericalError, RankDeficiencyWarning


def _database(matrix: np.ndarray) -> SnapshotDatabase:
    n_s = matrix.shape[1]
    return SnapshotDatabase(matrix=matrix, sampled_angles=np.arange(n_s, dtype=float), indices=np.arange(n_s))


@pytest.fixture
def rank_three_db():
    """24 x 20 database of exact rank 3."""
    rng = np.random.default_rng(8)
    return _database(rng.normal(size=(24, 3)) @ rng.normal(size=(3, 20)))


# ==================================================================================
#                                 TEST SUITES
# ==================================================================================

class TestDecompose:
    """
    Test suite for `decompose`.
    """

    def test_modes_are_orthonormal_with_fixed_signs(self, smooth_sinogram):
        """
        Tests orthonormal modes whose largest-magnitude entry is positive.
        """
        modes, singular_values, rank = decompose(smooth_sinogram.values)

        leading = modes[:, :rank]
        np.testing.assert_allclose(leading.T @ leading, np.eye(rank), atol=1e-10)
        pivots = np.argmax(np.abs(leading), axis=0)
        assert np.all(leading[pivots, np.arange(rank)] > 0)
        assert np.all(np.diff(singular_values) <= 0)

    def test_rank_of_low_rank_matrix(self, rank_three_db):
        """
        Tests that singular values below tolerance are zeroed.
        """
        _, singular_values, rank = decompose(rank_three_db.matrix)

        assert rank == 3
        assert np.all(singular_values[3:] == 0.0)


class TestBuildBasis:
    """
    Test suite for `build_basis`.
    """

    def test_basis_shape_and_spectrum(self, smooth_sinogram):
        """
        Tests truncation to k modes and the normalized spectrum.
        """
        db = sample_views(smooth_sinogram, 30, seed=1)

        basis = build_basis(db, 3)

        assert basis.k == 3
        assert basis.modes.shape == (24, 3)
        assert basis.singular_values.size == 24
        assert basis.normalized_spectrum.sum() == pytest.approx(1.0)
        assert basis.cumulative_variance[-1] == 1.0

    def test_sampled_columns_lie_in_the_span(self, smooth_sinogram):
        """
        Tests that a basis of the full rank reproduces its database.
        """
        db = sample_views(smooth_sinogram, 30, seed=1)

        basis = build_basis(db, 4)

        np.testing.assert_allclose(basis.modes @ (basis.modes.T @ db.matrix), db.matrix, atol=1e-10)

    @pytest.mark.parametrize("k", [0, 21])
    def test_k_out_of_range_raises(self, rank_three_db, k):
        """
        Tests that k must lie in [1, min(N, N_s)].
        """
        with pytest.raises(ConfigurationError):
            build_basis(rank_three_db, k)

    def test_zero_database_raises(self):
        """
        Tests that an all-zero database has no POD space.
        """
        with pytest.raises(NumericalError):
            build_basis(_database(np.zeros((5, 4))), 2)

    def test_rank_deficiency_reduces_k(self, rank_three_db):
        """
        Tests that k is cut to the numerical rank with a warning.
        """
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            basis = build_basis(rank_three_db, 10)

        assert basis.k == 3
        assert any(issubclass(w.category, RankDeficiencyWarning) for w in caught)


class TestVariance:
    """
    Test suite for `information_variance` and `modes_for_variance`.
    """

    @pytest.fixture
    def diagonal_basis(self):
        """Spectrum 4, 3, 2, 1: normalized 0.4, 0.3, 0.2, 0.1."""
        return spectrum_basis(np.diag([4.0, 3.0, 2.0, 1.0]))

    def test_spectrum_basis_keeps_every_mode(self, diagonal_basis):
        """
        Tests that the reference basis retains the full rank.
        """
        assert diagonal_basis.k == 4
        np.testing.assert_allclose(diagonal_basis.normalized_spectrum, [0.4, 0.3, 0.2, 0.1])

    def test_information_variance_bounds(self, diagonal_basis):
        """
        Tests that no mode carries nothing and every mode carries everything.
        """
        assert information_variance(diagonal_basis, 0) == 0.0
        assert information_variance(diagonal_basis, 2) == pytest.approx(0.7)
        assert information_variance(diagonal_basis, 4) == 1.0

    def test_information_variance_out_of_range(self, diagonal_basis):
        """
        Tests that j is range-checked.
        """
        with pytest.raises(ConfigurationError):
            information_variance(diagonal_basis, 5)

    @pytest.mark.parametrize("target,expected", [(0.35, 1), (0.5, 2), (0.85, 3), (0.95, 4), (1.0, 4)])
    def test_modes_for_variance(self, diagonal_basis, target, expected):
        """
        Tests the smallest mode count reaching each target.
        """
        assert modes_for_variance(diagonal_basis, target) == expected

    @pytest.mark.parametrize("target", [0.0, 1.5])
    def test_invalid_target_raises(self, diagonal_basis, target):
        """
        Tests that targets outside (0, 1] are rejected.
        """
        with pytest.raises(ConfigurationError):
            modes_for_variance(diagonal_basis, target)

    def test_zero_matrix_has_no_spectrum(self):
        """
        Tests that the spectrum of a zero matrix is an error.
        """
        with pytest.raises(NumericalError):
            spectrum_basis(np.zeros((3, 3)))


class TestModeAgreement:
    """
    Test suite for `mode_agreement`.
    """

    def test_sampled_basis_recovers_the_full_modes(self, smooth_sinogram):
        """
        Tests that enough random views recover the leading modes of the full sinogram.
        """
        full = spectrum_basis(smooth_sinogram.values)
        sampled = build_basis(sample_views(smooth_sinogram, 60, seed=2), 4)

        agreement = mode_agreement(sampled, full, 2)

        assert agreement[0] > 0.99
        assert agreement[1] > 0.9
        assert np.all(agreement <= 1.0 + 1e-12)

    def test_count_out_of_range_raises(self, smooth_sinogram):
        """
        Tests that only shared modes can be compared.
        """
        basis = build_basis(sample_views(smooth_sinogram, 30, seed=2), 2)

        with pytest.raises(ConfigurationError):
            mode_agreement(basis, basis, 3)


class TestProjectionProperties:
    """
    Test suite for the optimality of the POD projection and the spectra of
    sampled databases.
    """

    def test_projection_beats_any_other_coefficients(self, smooth_sinogram):
        """
        Tests ||X - U U^T X|| <= ||X - U B|| for 100 random coefficient sets B,
        half of them close to U^T X.
        """
        rng = np.random.default_rng(12)
        x = smooth_sinogram.values + 0.05 * rng.normal(size=smooth_sinogram.values.shape)
        basis = build_basis(sample_views(smooth_sinogram, 40, seed=3), 3)
        u = basis.modes
        projected = u.T @ x
        best = np.linalg.norm(x - u @ projected)

        for trial in range(100):
            scale = 1e-3 if trial % 2 else 1.0
            b = projected + scale * rng.normal(size=projected.shape)
            assert best <= np.linalg.norm(x - u @ b) * (1.0 + 1e-12)

    @pytest.mark.parametrize("n_s", [10, 60, 200])
    def test_sampled_spectrum_is_dominated_by_the_full_spectrum(self, smooth_sinogram, n_s):
        """
        Tests that every singular value of a column subset stays below the
        matching singular value of the full sinogram.
        """
        values = smooth_sinogram.values + 0.02 * np.random.default_rng(n_s).normal(size=(24, 360))
        noisy = Sinogram(values=values, angles=smooth_sinogram.angles)
        full = spectrum_basis(values).singular_values

        for seed in range(5):
            sampled = spectrum_basis(sample_views(noisy, n_s, seed=seed).matrix).singular_values
            count = min(sampled.size, full.size)
            assert np.all(sampled[:count] <= full[:count] * (1.0 + 1e-10))
