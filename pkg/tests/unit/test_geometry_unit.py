"""
test: tests/unit/test_geometry_unit.py

Unit tests for the assembly rasterization in `app.services.geometry.assembly`
and for the grid/assembly schemas it depends on.

Test Suites:
1. TestGridSpec: Pixel counts, centers and voxel heights of the domain.
2. TestRasterize: Fuel classification, rotation and coverage checks.
3. TestVoxelCenters: Voxel barycenters of a pixel column.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import ndimage

from app.models.schemas import AssemblySpec, GridSpec
from app.services.geometry import load_layout, rasterize, rotate_points, voxel_centers
from app.utility.errors import ConfigurationError, DomainCoverageError


# ==================================================================================
#                                 TEST SUITES
# ==================================================================================

class TestGridSpec:
    """
    Test suite for `GridSpec`.
    """

    def test_counts_do_not_suffer_from_representation_error(self):
        """
        Tests that 100 mm split into 10 mm steps gives exactly 10 cells.
        """
        grid = GridSpec(dx=10.0, dy=10.0, dz=10.0, half_extent_xy=50.0, half_extent_z=50.0)

        assert grid.n_side == 10
        assert grid.n_pix == 100
        assert grid.n_vox == 10

    def test_enclosing_grid_contains_the_rotated_lattice(self, small_assembly):
        """
        Tests that the default grid leaves one pitch of margin around the
        circumscribed circle of the lattice.
        """
        grid = GridSpec.enclosing(small_assembly, dx=2.0, dz=10.0, half_extent_z=10.0)

        assert grid.half_extent_xy == pytest.approx(small_assembly.circumscribed_radius() + 12.6)
        assert grid.n_side == 36
        assert grid.n_vox == 2

    def test_pixel_centers_are_centered_and_row_major(self, coarse_grid):
        """
        Tests that pixel p = row * n_side + col has x from col and y from row.
        """
        xs, ys = coarse_grid.pixel_centers()

        assert xs[0] == pytest.approx(-35.0)
        assert ys[0] == pytest.approx(-35.0)
        assert xs[1] == pytest.approx(-33.0)
        assert ys[coarse_grid.n_side] == pytest.approx(-33.0)
        assert xs.mean() == pytest.approx(0.0, abs=1e-12)

    def test_voxel_heights_are_symmetric(self):
        """
        Tests that voxel mid-heights are symmetric about z = 0.
        """
        grid = GridSpec(dx=1.0, dy=1.0, dz=10.0, half_extent_xy=5.0, half_extent_z=50.0)

        np.testing.assert_allclose(grid.voxel_heights(), np.arange(-45.0, 50.0, 10.0))

    def test_non_square_pixels_are_rejected(self):
        """
        Tests that dx != dy fails validation.
        """
        with pytest.raises(ValidationError):
            GridSpec(dx=1.0, dy=2.0)

    def test_overlapping_pins_are_rejected(self):
        """
        Tests that a pitch not exceeding the pin diameter fails validation.
        """
        with pytest.raises(ValidationError):
            AssemblySpec(pin_pitch=9.0, pin_radius=4.75)

    def test_missing_pin_outside_lattice_is_rejected(self):
        """
        Tests that a removed position must lie inside the lattice.
        """
        with pytest.raises(ValidationError):
            AssemblySpec(lattice_rows=3, lattice_cols=3, missing_pins=[(3, 0)])


class TestRasterize:
    """
    Test suite for `rasterize`.
    """

    def test_gap_layout_has_91_separate_pins(self):
        """
        Tests that the bundled 10x10 layout with a 3x3 gap rasterizes to
        91 disjoint fuel regions.
        """
        spec = load_layout("pwr_10x10_3x3gap")
        grid = GridSpec.enclosing(spec, dx=0.5)

        material = rasterize(spec, grid, 0.0)
        fuel = material.lam_image() == spec.emission_fuel
        _, count = ndimage.label(fuel)

        assert count == 91

    def test_empty_lattice_is_all_background(self):
        """
        Tests that a lattice without pins yields background values everywhere.
        """
        spec = AssemblySpec(lattice_rows=1, lattice_cols=1, missing_pins=[(0, 0)])
        grid = GridSpec(dx=1.0, dy=1.0, half_extent_xy=10.0)

        material = rasterize(spec, grid, 45.0)

        assert np.all(material.lam == spec.emission_background)
        assert np.all(material.mu == spec.attenuation_background)

    def test_centered_pin_is_rotation_invariant(self):
        """
        Tests that a single pin on the rotation axis rasterizes identically
        at 0 and 90 degrees.
        """
        spec = AssemblySpec(lattice_rows=1, lattice_cols=1)
        grid = GridSpec(dx=0.5, dy=0.5, half_extent_xy=10.0)

        first = rasterize(spec, grid, 0.0)
        second = rasterize(spec, grid, 90.0)

        np.testing.assert_array_equal(first.lam, second.lam)
        np.testing.assert_array_equal(first.mu, second.mu)

    def test_rasterization_is_deterministic(self, small_assembly, coarse_grid):
        """
        Tests that repeated calls return bit-identical maps.
        """
        first = rasterize(small_assembly, coarse_grid, 37.0)
        second = rasterize(small_assembly, coarse_grid, 37.0)

        np.testing.assert_array_equal(first.lam, second.lam)
        np.testing.assert_array_equal(first.mu, second.mu)

    def test_fuel_area_is_preserved_under_rotation(self):
        """
        Tests that the fuel pixel count stays within 2 % of the analytic pin
        area at several angles.
        """
        spec = load_layout("pwr_10x10_3x3gap")
        grid = GridSpec.enclosing(spec, dx=0.5)
        expected = 91 * math.pi * spec.pin_radius ** 2 / (grid.dx * grid.dx)

        for angle in (0.0, 17.0, 45.0, 90.0, 133.0, 271.0):
            material = rasterize(spec, grid, angle)
            count = np.count_nonzero(material.lam == spec.emission_fuel)
            assert count == pytest.approx(expected, rel=0.02)

    def test_matches_center_membership_classification(self, small_assembly):
        """
        Tests that every pixel is fuel exactly when its center lies in a
        rotated pin disk.
        """
        grid = GridSpec.enclosing(small_assembly, dx=1.0)
        angle = 30.0

        material = rasterize(small_assembly, grid, angle)

        xs, ys = grid.pixel_centers()
        radius = small_assembly.pin_radius
        expected = np.zeros(grid.n_pix, dtype=bool)
        for cx, cy in rotate_points(small_assembly.pin_centers(), angle):
            expected |= ((ys - cy) ** 2 + (xs - cx) ** 2) <= radius * radius
        np.testing.assert_array_equal(material.lam == small_assembly.emission_fuel, expected)
        np.testing.assert_array_equal(
            material.mu,
            np.where(expected, small_assembly.attenuation_fuel, small_assembly.attenuation_background),
        )

    def test_missing_corner_rotates_counter_clockwise(self, small_assembly):
        """
        Tests that the removed top-left pin ends up bottom-left after a
        quarter turn.
        """
        grid = GridSpec.enclosing(small_assembly, dx=1.0)
        fuel = rasterize(small_assembly, grid, 90.0).lam_image() > 0
        n = grid.n_side
        pitch_px = int(round(small_assembly.pin_pitch / grid.dx))
        center = n // 2

        def occupied(row_offset: int, col_offset: int) -> bool:
            return bool(fuel[center + row_offset, center + col_offset])

        # image rows grow along +y: negative row offset is the bottom
        assert not occupied(-pitch_px, -pitch_px)
        assert occupied(pitch_px, -pitch_px)
        assert occupied(pitch_px, pitch_px)
        assert occupied(-pitch_px, pitch_px)

    def test_grid_too_small_raises(self, small_assembly):
        """
        Tests that a grid not holding the rotated lattice is rejected.
        """
        grid = GridSpec(dx=1.0, dy=1.0, half_extent_xy=10.0)

        with pytest.raises(DomainCoverageError):
            rasterize(small_assembly, grid, 0.0)

    @pytest.mark.parametrize("angle", [-1.0, 360.0, 400.0])
    def test_angle_out_of_range_raises(self, small_assembly, coarse_grid, angle):
        """
        Tests that angles outside [0, 360) are rejected.
        """
        with pytest.raises(ConfigurationError):
            rasterize(small_assembly, coarse_grid, angle)


class TestVoxelCenters:
    """
    Test suite for `voxel_centers`.
    """

    def test_first_pixel_column(self, coarse_grid):
        """
        Tests the barycenters of the voxels stacked on pixel 0.
        """
        points = voxel_centers(coarse_grid, 0)

        np.testing.assert_allclose(points, [[-35.0, -35.0, -5.0], [-35.0, -35.0, 5.0]])

    def test_voxels_share_the_pixel_center(self, coarse_grid):
        """
        Tests that every voxel of a column has the pixel's (x, y).
        """
        xs, ys = coarse_grid.pixel_centers()
        pixel = 5 * coarse_grid.n_side + 7

        points = voxel_centers(coarse_grid, pixel)

        assert np.all(points[:, 0] == pytest.approx(xs[pixel]))
        assert np.all(points[:, 1] == pytest.approx(ys[pixel]))

    @pytest.mark.parametrize("pixel", [-1, 36 * 36])
    def test_out_of_range_pixel_raises(self, coarse_grid, pixel):
        """
        Tests that an invalid pixel index is rejected.
        """
        with pytest.raises(ConfigurationError):
            voxel_centers(coarse_grid, pixel)
