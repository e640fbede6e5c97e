"""Tests for velocity recovery, boundary traces and normalization."""

from __future__ import annotations

import math

import numpy as np
import pytest

from halfplane_vorticity.biot_savart import (
    boundary_trace,
    normalize_measure,
    stream_curl,
    trace_tail_mass,
    velocity_from_measure,
)
from halfplane_vorticity.exceptions import InvalidParameterError
from halfplane_vorticity.grid_core import HalfPlaneGrid, LineSamples, ScalarField, VorticityMeasure
from halfplane_vorticity.scenarios import builtin_initial


@pytest.fixture
def blob(small_grid: HalfPlaneGrid) -> VorticityMeasure:
    return builtin_initial("smooth_blob", {}, small_grid)


class TestVelocity:
    """Tests for velocity_from_measure."""

    def test_atom_boundary_velocity(self, small_grid: HalfPlaneGrid) -> None:
        """Test u1(x1, 0) = kappa / (pi (x1^2 + 1)) and u2 = 0 for an atom at (0, 1)."""
        u = velocity_from_measure(VorticityMeasure.point_vortex(0.7, (0.0, 1.0)), small_grid)

        np.testing.assert_allclose(u.u1[0], 0.7 / (math.pi * (small_grid.x1**2 + 1.0)), atol=1e-12)
        np.testing.assert_allclose(u.u2[0], 0.0, atol=1e-12)

    def test_boundary_sources_have_no_velocity(self, small_grid: HalfPlaneGrid) -> None:
        """Test atoms and layers on x2 = 0 induce no velocity."""
        layer = LineSamples(small_grid.x1_min, small_grid.x1_max, np.ones(small_grid.n1))
        mu = VorticityMeasure.point_vortex(1.0, (0.3, 0.0)) + VorticityMeasure(boundary_sheet=layer)

        u = velocity_from_measure(mu, small_grid)

        np.testing.assert_array_equal(u.u1, 0.0)
        np.testing.assert_array_equal(u.u2, 0.0)

    def test_density_velocity_is_divergence_free(self, blob: VorticityMeasure) -> None:
        """Test the stream-function route keeps the discrete divergence at rounding level."""
        assert blob.density is not None
        grid = blob.density.grid

        v = velocity_from_measure(blob)

        scale = float(np.max(v.magnitude())) / min(grid.h1, grid.h2)
        assert np.max(np.abs(v.divergence())) <= 1e-6 * scale

    def test_hosted_node_is_flagged(self, small_grid: HalfPlaneGrid) -> None:
        """Test an atom sitting on a node is reported in singular_nodes."""
        node = (float(small_grid.x1[32]), float(small_grid.x2[4]))

        u = velocity_from_measure(VorticityMeasure.point_vortex(1.0, node), small_grid)

        assert u.singular_nodes == ((4, 32),)
        assert np.all(np.isfinite(u.u1))

    def test_measure_needs_grid(self) -> None:
        """Test measures without a density need an explicit grid."""
        with pytest.raises(InvalidParameterError):
            velocity_from_measure(VorticityMeasure.point_vortex(1.0, (0.0, 1.0)))

    def test_stream_curl_of_shear(self, small_grid: HalfPlaneGrid) -> None:
        """Test psi = x2^2 gives u = (2 x2, 0)."""
        psi = ScalarField.from_function(small_grid, lambda a, b: b**2)
        _, X2 = small_grid.mesh()

        u = stream_curl(psi)

        np.testing.assert_allclose(u.u1[1:-1], 2 * X2[1:-1], atol=1e-10)
        np.testing.assert_allclose(u.u2, 0.0, atol=1e-12)


class TestBoundaryTrace:
    """Tests for boundary_trace and trace_tail_mass."""

    def test_atom_trace_is_poisson_kernel(self, small_grid: HalfPlaneGrid) -> None:
        """Test T1 of an atom is kappa P_{y2}(x1 - y1)."""
        trace = boundary_trace(VorticityMeasure.point_vortex(0.7, (0.0, 1.0)), small_grid)

        np.testing.assert_allclose(trace.values, 0.7 / (math.pi * (small_grid.x1**2 + 1.0)), atol=1e-12)

    def test_boundary_layer_passes_through(self, small_grid: HalfPlaneGrid) -> None:
        """Test a boundary layer is its own trace."""
        layer = LineSamples(small_grid.x1_min, small_grid.x1_max, np.exp(-(small_grid.x1**2)))

        trace = boundary_trace(VorticityMeasure(boundary_sheet=layer), small_grid)

        np.testing.assert_allclose(trace.values, layer.values, atol=1e-15)

    def test_boundary_atom_keeps_its_mass(self, small_grid: HalfPlaneGrid) -> None:
        """Test an atom on x2 = 0 is deposited with its full weight."""
        trace = boundary_trace(VorticityMeasure.point_vortex(2.0, (0.3, 0.0)), small_grid)

        assert trace.integral() == pytest.approx(2.0, rel=1e-12)
        assert trace.values.min() >= 0.0

    def test_trace_integral_equals_mass(self, small_grid: HalfPlaneGrid, blob: VorticityMeasure) -> None:
        """Test the window integral plus the tail is the total mass."""
        mu = VorticityMeasure.point_vortex(0.7, (0.0, 1.0)) + blob

        window = boundary_trace(mu, small_grid).integral()

        assert window + trace_tail_mass(mu, small_grid.x1_min, small_grid.x1_max) == pytest.approx(
            mu.total_mass(), abs=1e-4
        )

    def test_tail_of_boundary_atom(self) -> None:
        """Test boundary mass counts where it sits."""
        mu = VorticityMeasure.atoms([(0.0, 0.0), (10.0, 0.0)], [1.0, 3.0])

        assert trace_tail_mass(mu, -1.0, 1.0) == pytest.approx(3.0)

    def test_tail_of_interior_atom(self) -> None:
        """Test the closed-form window integral of the Poisson kernel."""
        mu = VorticityMeasure.point_vortex(1.0, (0.0, 1.0))

        assert trace_tail_mass(mu, -1.0, 1.0) == pytest.approx(0.5, rel=1e-14)

    def test_trace_zero_dipole(self, medium_grid: HalfPlaneGrid) -> None:
        """Test the curl of a Gaussian dipole stream function has a vanishing trace."""
        dipole = builtin_initial("trace_zero_dipole", {}, medium_grid)

        assert boundary_trace(dipole, medium_grid).max_abs() < 1e-6


class TestNormalize:
    """Tests for normalize_measure."""

    def test_normalized_trace_vanishes(self, small_grid: HalfPlaneGrid, unit_atom: VorticityMeasure) -> None:
        """Test T1 of the normalized measure is zero."""
        normalized = normalize_measure(unit_atom, small_grid)

        assert boundary_trace(normalized, small_grid).max_abs() < 1e-12

    def test_idempotent(self, small_grid: HalfPlaneGrid, blob: VorticityMeasure) -> None:
        """Test normalizing twice changes nothing."""
        mu = VorticityMeasure.point_vortex(0.7, (0.0, 1.0)) + blob
        once = normalize_measure(mu, small_grid)

        twice = normalize_measure(once, small_grid)

        assert once.boundary_sheet is not None
        assert twice.boundary_sheet is not None
        np.testing.assert_allclose(twice.boundary_sheet.values, once.boundary_sheet.values, atol=1e-10)

    def test_velocity_unchanged(self, small_grid: HalfPlaneGrid, unit_atom: VorticityMeasure) -> None:
        """Test the subtracted layer carries no velocity."""
        before = velocity_from_measure(unit_atom, small_grid)

        after = velocity_from_measure(normalize_measure(unit_atom, small_grid), small_grid)

        np.testing.assert_array_equal(after.u1, before.u1)
        np.testing.assert_array_equal(after.u2, before.u2)
