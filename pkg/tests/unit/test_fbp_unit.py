"""
test: tests/unit/test_fbp_unit.py

Unit tests for filtered backprojection in `app.services.recon.fbp`.

Test Suites:
1. TestRampFilter: Padding and frequency response.
2. TestFbp: Reconstruction geometry, scaling and validation.
"""

import logging

import numpy as np
import pytest

from app.models.arrays import Sinogram
from app.services.recon.fbp import fbp, filter_views, padded_length, ramp_filter
from app.utility.errors import ConfigurationError, NumericalError

N_ROWS = 65
CENTER = (N_ROWS - 1) // 2
FULL_TURN = np.arange(360.0)


def _point_sinogram(x0: float, y0: float) -> Sinogram:
    """Linear-hat projections of a point at (x0, y0) in detector units."""
    theta = np.deg2rad(FULL_TURN)
    t = x0 * np.sin(theta) + y0 * np.cos(theta) + CENTER
    rows = np.arange(N_ROWS, dtype=float)[:, None]
    values = np.clip(1.0 - np.abs(rows - t[None, :]), 0.0, None)
    return Sinogram(values=values, angles=FULL_TURN)


def _disk_sinogram(radius: float, n_rows: int = N_ROWS) -> Sinogram:
    """Exact projections of a unit-density disk centered on the rotation axis."""
    offsets = np.arange(n_rows, dtype=float) - (n_rows - 1) / 2.0
    chord = 2.0 * np.sqrt(np.clip(radius ** 2 - offsets ** 2, 0.0, None))
    return Sinogram(values=np.repeat(chord[:, None], 360, axis=1), angles=FULL_TURN)


# ==================================================================================
#                                 TEST SUITES
# ==================================================================================

class TestRampFilter:
    """
    Test suite for the ramp filter helpers.
    """

    @pytest.mark.parametrize("rows,expected", [(1, 2), (5, 16), (24, 64), (32, 64), (33, 128), (182, 512)])
    def test_padded_length(self, rows, expected):
        """
        Tests padding to the next power of two of twice the rows.
        """
        assert padded_length(rows) == expected

    def test_filter_suppresses_dc_and_passes_nyquist(self):
        """
        Tests the ramp shape: near zero at DC, maximal at Nyquist.
        """
        response = ramp_filter(128)

        assert abs(response[0]) < 0.01
        assert response[64] == pytest.approx(np.max(response))
        assert response[64] > 0.9

    def test_filtering_is_linear_per_view(self):
        """
        Tests that views are filtered independently and linearly.
        """
        rng = np.random.default_rng(0)
        values = rng.uniform(size=(32, 3))

        filtered = filter_views(values)

        assert filtered.shape == (32, 3)
        np.testing.assert_allclose(filter_views(2.0 * values), 2.0 * filtered, rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(filter_views(values[:, 1:2])[:, 0], filtered[:, 1], rtol=1e-12, atol=1e-14)


class TestFbp:
    """
    Test suite for `fbp`.
    """

    def test_centered_point_peaks_at_the_center(self):
        """
        Tests that a point on the rotation axis reconstructs at the image center.
        """
        image = fbp(_point_sinogram(0.0, 0.0), workers=1).pixels

        assert image.shape == (N_ROWS, N_ROWS)
        assert np.unravel_index(np.argmax(image), image.shape) == (CENTER, CENTER)

    def test_offset_point_lands_at_its_coordinates(self):
        """
        Tests that x maps to columns and y to rows counted from the top.
        """
        image = fbp(_point_sinogram(10.0, -6.0), workers=1).pixels

        row, col = np.unravel_index(np.argmax(image), image.shape)
        assert abs(row - (CENTER + 6)) <= 1
        assert abs(col - (CENTER + 10)) <= 1

    def test_unit_disk_reconstructs_unit_density(self):
        """
        Tests the pi / (2 N_views) scaling on a uniform disk.
        """
        image = fbp(_disk_sinogram(20.0), workers=1).pixels

        core = image[CENTER - 8:CENTER + 9, CENTER - 8:CENTER + 9]
        assert core.mean() == pytest.approx(1.0, abs=0.05)
        assert abs(image[2, 2]) < 0.05

    def test_disk_phantom_at_the_instrument_size(self):
        """
        Tests a 182-row, 360-view disk: mean absolute interior error below
        5 % of the disk density.
        """
        n_rows, radius = 182, 60.0
        image = fbp(_disk_sinogram(radius, n_rows), workers=1).pixels
        offsets = np.arange(n_rows, dtype=float) - (n_rows - 1) / 2.0
        distance = np.hypot(offsets[None, :], offsets[:, None])

        interior = distance <= radius - 3.0
        assert image.shape == (n_rows, n_rows)
        assert np.mean(np.abs(image[interior] - 1.0)) < 0.05

    def test_reconstruction_is_linear(self):
        """
        Tests fbp(a X + b Y) = a fbp(X) + b fbp(Y) on random sinograms.
        """
        rng = np.random.default_rng(4)
        x = rng.uniform(size=(N_ROWS, 360))
        y = rng.normal(size=(N_ROWS, 360))

        combined = fbp(Sinogram(values=2.5 * x - 0.75 * y, angles=FULL_TURN), workers=1).pixels
        expected = (
            2.5 * fbp(Sinogram(values=x, angles=FULL_TURN), workers=1).pixels
            - 0.75 * fbp(Sinogram(values=y, angles=FULL_TURN), workers=1).pixels
        )

        np.testing.assert_allclose(combined, expected, rtol=0.0, atol=1e-8)

    def test_quarter_turn_shift_rotates_the_image(self):
        """
        Tests that shifting the views by 90 degrees rotates the image by 90 degrees.
        """
        rng = np.random.default_rng(1)
        values = rng.uniform(size=(N_ROWS, 360))
        original = fbp(Sinogram(values=values, angles=FULL_TURN), workers=1).pixels

        shifted = fbp(Sinogram(values=np.roll(values, -90, axis=1), angles=FULL_TURN), workers=1).pixels

        np.testing.assert_allclose(shifted, np.rot90(original, 1), atol=1e-8 * np.abs(original).max())

    def test_result_does_not_depend_on_worker_count(self):
        """
        Tests bit-identical images for one and several workers.
        """
        sinogram = _point_sinogram(4.0, 7.0)

        np.testing.assert_array_equal(fbp(sinogram, workers=1).pixels, fbp(sinogram, workers=4).pixels)

    def test_pixel_size_is_recorded(self):
        """
        Tests that the detector pitch is stored with the image.
        """
        assert fbp(_point_sinogram(0.0, 0.0), pixel_size=2.5, workers=1).pixel_size == 2.5

    def test_partial_coverage_logs_a_warning(self, caplog):
        """
        Tests that views other than the full 1-degree turn are reported.
        """
        sinogram = Sinogram(values=np.ones((8, 4)), angles=[0.0, 90.0, 180.0, 270.0])

        with caplog.at_level(logging.WARNING, logger="app.services.recon.fbp"):
            fbp(sinogram, workers=1)

        assert "not the full" in caplog.text

    def test_single_view_raises(self):
        """
        Tests that one view cannot be reconstructed.
        """
        with pytest.raises(ConfigurationError):
            fbp(Sinogram(values=np.ones((8, 1)), angles=[0.0]))

    def test_non_finite_values_raise(self):
        """
        Tests that NaN input is rejected.
        """
        values = np.ones((8, 360))
        values[3, 10] = np.nan

        with pytest.raises(NumericalError):
            fbp(Sinogram(values=values, angles=FULL_TURN))
