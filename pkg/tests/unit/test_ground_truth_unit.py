"""
test: tests/unit/test_ground_truth_unit.py

Unit tests for the synthetic ground truth in `app.services.forward.ground_truth`.

Test Suites:
1. TestSubElements: Face sub-sampling geometry.
2. TestPoissonNoise: Counting noise.
3. TestSynthesize: End-to-end synthesis on a coarse grid.
"""

import numpy as np
import pytest

from app.models.schemas import DetectorArray, FidelityConfig, GridSpec
from app.services.forward.ground_truth import (
    apply_poisson_noise,
    sub_element_centers,
    synthesize_ground_truth,
)
from app.services.forward.model import full_sinogram, normalize_sinogram
from app.utility.errors import ConfigurationError

ANGLES = [0.0, 45.0, 90.0, 135.0, 200.0]


# ==================================================================================
#                                 TEST SUITES
# ==================================================================================

class TestSubElements:
    """
    Test suite for `sub_element_centers`.
    """

    def test_single_sub_element_is_the_face_center(self, small_array):
        """
        Tests that no sub-sampling keeps the detector centers.
        """
        np.testing.assert_array_equal(sub_element_centers(small_array, 1), small_array.element_centers())

    def test_sub_elements_tile_each_face(self):
        """
        Tests that sub-elements split each face evenly around its center.
        """
        array = DetectorArray(n_detectors=2, pitch=10.0, face_width=4.0)

        centers = sub_element_centers(array, 4).reshape(2, 4)

        np.testing.assert_allclose(centers[0], [-6.5, -5.5, -4.5, -3.5])
        np.testing.assert_allclose(centers.mean(axis=1), array.element_centers())


class TestPoissonNoise:
    """
    Test suite for `apply_poisson_noise`.
    """

    def test_noise_is_reproducible_for_a_seed(self):
        """
        Tests that equal seeds draw equal counts.
        """
        values = np.linspace(0.0, 1.0, 50)

        first = apply_poisson_noise(values, 1e3, np.random.default_rng(11))
        second = apply_poisson_noise(values, 1e3, np.random.default_rng(11))

        np.testing.assert_array_equal(first, second)

    def test_noise_has_poisson_statistics(self):
        """
        Tests that standardized deviations have unit spread.
        """
        values = np.full(20_000, 0.5)
        scale = 400.0

        noisy = apply_poisson_noise(values, scale, np.random.default_rng(2))
        z = (noisy - values) * scale / np.sqrt(values * scale)

        assert abs(z.mean()) < 0.05
        assert z.std() == pytest.approx(1.0, rel=0.2)

    def test_zero_values_stay_zero(self):
        """
        Tests that a zero expectation never produces counts.
        """
        noisy = apply_poisson_noise(np.zeros(100), 1e4, np.random.default_rng(0))

        np.testing.assert_array_equal(noisy, np.zeros(100))

    @pytest.mark.parametrize("scale", [0.0, -5.0])
    def test_non_positive_scale_raises(self, scale):
        """
        Tests that the count scale must be positive.
        """
        with pytest.raises(ConfigurationError):
            apply_poisson_noise(np.ones(3), scale, np.random.default_rng(0))


class TestSynthesize:
    """
    Test suite for `synthesize_ground_truth`.
    """

    def test_plain_settings_reproduce_the_realtime_model(self, small_assembly, small_array):
        """
        Tests that no noise, no blur, one sub-element and the Real-Time grid
        give exactly the normalized Real-Time sinogram.
        """
        fidelity = FidelityConfig(dx=2.0, face_subsampling=1, poisson_noise=False, blur_rows=0.0)
        grid = GridSpec.enclosing(small_assembly, dx=2.0, dz=10.0, half_extent_z=10.0)

        truth = synthesize_ground_truth(
            small_assembly, fidelity, seed=1, array=small_array, angles=ANGLES,
            dz=10.0, half_extent_z=10.0, workers=1,
        )
        realtime = normalize_sinogram(full_sinogram(small_assembly, grid, small_array, ANGLES, workers=1))

        np.testing.assert_array_equal(truth.values, realtime.values)

    def test_truth_is_normalized_and_seeded(self, small_assembly, small_array):
        """
        Tests that the noisy truth is normalized and reproducible per seed.
        """
        fidelity = FidelityConfig(dx=1.5, face_subsampling=2, count_scale=1e3)
        kwargs = dict(array=small_array, angles=ANGLES, dz=10.0, half_extent_z=10.0, workers=1)

        first = synthesize_ground_truth(small_assembly, fidelity, seed=4, **kwargs)
        second = synthesize_ground_truth(small_assembly, fidelity, seed=4, **kwargs)
        other = synthesize_ground_truth(small_assembly, fidelity, seed=5, **kwargs)

        assert first.normalized
        assert first.values.min() == 0.0 and first.values.max() == pytest.approx(1.0)
        assert first.values.shape == (small_array.n_detectors, len(ANGLES))
        np.testing.assert_array_equal(first.values, second.values)
        assert not np.array_equal(first.values, other.values)

    def test_truth_differs_from_the_realtime_model(self, small_assembly, small_array):
        """
        Tests that the richer physics moves the truth away from the Real-Time
        sinogram while staying close to it.
        """
        fidelity = FidelityConfig(dx=1.0, face_subsampling=2, poisson_noise=False, blur_rows=0.5)
        grid = GridSpec.enclosing(small_assembly, dx=2.0, dz=10.0, half_extent_z=10.0)

        truth = synthesize_ground_truth(
            small_assembly, fidelity, seed=0, array=small_array, angles=ANGLES,
            dz=10.0, half_extent_z=10.0, workers=1,
        )
        realtime = normalize_sinogram(full_sinogram(small_assembly, grid, small_array, ANGLES, workers=1))
        difference = np.abs(truth.values - realtime.values)

        assert difference.max() > 1e-3
        assert difference.mean() < 0.1

    def test_non_positive_count_scale_raises(self, small_assembly, small_array):
        """
        Tests that a zero count scale is rejected before any computation.
        """
        fidelity = FidelityConfig(dx=2.0, count_scale=0.0)

        with pytest.raises(ConfigurationError):
            synthesize_ground_truth(small_assembly, fidelity, seed=0, array=small_array, angles=ANGLES)
