"""Tests for the built-in initial vorticities."""

from __future__ import annotations

import numpy as np
import pytest

from halfplane_vorticity.exceptions import InvalidParameterError, UnknownScenarioError
from halfplane_vorticity.grid_core import HalfPlaneGrid, integrate_field
from halfplane_vorticity.scenarios import (
    DEFAULT_KAPPA,
    builtin_initial,
    dipole_stream_function,
    gaussian_bump,
    gaussian_bump_laplacian,
    registry,
    sheet_from_curve,
)
from halfplane_vorticity.semigroups import five_point_laplacian


class TestScenarioRegistry:
    """Tests for ScenarioRegistry."""

    def test_list_scenarios(self) -> None:
        """Test every built-in scenario is registered."""
        assert set(registry.list_scenarios()) == {
            "point_vortex",
            "vortex_pair",
            "vortex_sheet",
            "smooth_blob",
            "trace_zero_dipole",
            "stokes_only",
        }

    def test_solver_choice(self) -> None:
        """Test only stokes_only skips the Picard iteration."""
        assert registry.get_info("stokes_only").solver == "stokes"
        assert registry.get_info("point_vortex").solver == "picard"

    def test_unknown(self) -> None:
        """Test unknown names raise UnknownScenarioError with exit code 2."""
        with pytest.raises(UnknownScenarioError) as exc_info:
            builtin_initial("hurricane")

        assert exc_info.value.exit_code == 2
        assert "point_vortex" in str(exc_info.value.hint)


class TestAtomScenarios:
    """Tests for point vortices and pairs."""

    def test_point_vortex_default(self, small_grid: HalfPlaneGrid) -> None:
        """Test the default atom sits at (0, 1) with the default circulation."""
        mu = builtin_initial("point_vortex", {}, small_grid)

        np.testing.assert_array_equal(mu.atom_points, [[0.0, 1.0]])
        assert mu.total_mass() == pytest.approx(DEFAULT_KAPPA)

    def test_point_vortex_takes_one_atom(self, small_grid: HalfPlaneGrid) -> None:
        """Test extra atoms are rejected."""
        with pytest.raises(InvalidParameterError):
            builtin_initial("point_vortex", {"atoms": [[0, 1, 1], [1, 1, 1]]}, small_grid)

    def test_vortex_pair(self, small_grid: HalfPlaneGrid) -> None:
        """Test the pair is odd in x1 with zero total mass."""
        mu = builtin_initial("vortex_pair", {"amplitude": 0.2}, small_grid)

        assert mu.atom_weights.tolist() == [0.2, -0.2]
        assert mu.total_mass() == 0.0
        np.testing.assert_array_equal(mu.mirrored().atom_points, mu.atom_points[::-1])


class TestContinuousScenarios:
    """Tests for sheets, blobs and the dipole."""

    def test_vortex_sheet_mass(self, small_grid: HalfPlaneGrid) -> None:
        """Test a unit-density sheet on [-1, 1] carries mass 2."""
        mu = builtin_initial("vortex_sheet", {}, small_grid)

        assert mu.total_mass() == pytest.approx(2.0, abs=1e-10)
        assert mu.sheet_weights.size == 200
        np.testing.assert_array_equal(mu.sheet_points[:, 1], 1.0)

    def test_sheet_from_curve_arc_length(self) -> None:
        """Test chord weights sum to the length of a semicircle."""
        mu = sheet_from_curve(lambda s: (np.cos(s), 1.0 + np.sin(s)), 0.0, np.pi, 1.0, 2000)

        assert mu.total_mass() == pytest.approx(np.pi, rel=1e-6)

    def test_sheet_must_stay_in_half_plane(self) -> None:
        """Test curves dipping below x2 = 0 are rejected."""
        with pytest.raises(InvalidParameterError):
            sheet_from_curve(lambda s: (s, s), -1.0, 1.0, 1.0, 10)

    def test_smooth_blob_mass(self, medium_grid: HalfPlaneGrid) -> None:
        """Test the Gaussian blob has the requested amplitude as its mass."""
        mu = builtin_initial("smooth_blob", {"amplitude": 3.0, "density": {"x2": 3.0}}, medium_grid)

        assert mu.density is not None
        assert integrate_field(mu.density) == pytest.approx(3.0, rel=1e-8)

    def test_blob_width_positive(self, small_grid: HalfPlaneGrid) -> None:
        """Test a non-positive width is rejected."""
        with pytest.raises(InvalidParameterError):
            builtin_initial("smooth_blob", {"density": {"width": 0.0}}, small_grid)

    def test_dipole_has_zero_mass(self, medium_grid: HalfPlaneGrid) -> None:
        """Test the dipole is odd in x1 and has no mass."""
        mu = builtin_initial("trace_zero_dipole", {}, medium_grid)

        assert mu.density is not None
        assert abs(integrate_field(mu.density)) < 1e-10
        np.testing.assert_allclose(mu.density.values[:, ::-1], -mu.density.values, atol=1e-10)

    def test_dipole_needs_coverage(self) -> None:
        """Test a window too small for the dipole support is rejected."""
        with pytest.raises(InvalidParameterError):
            builtin_initial("trace_zero_dipole", {}, HalfPlaneGrid.symmetric(1.5, 8.0, 64, 64))

    def test_stokes_only_components(self, small_grid: HalfPlaneGrid) -> None:
        """Test stokes_only combines the requested components."""
        atom_only = builtin_initial("stokes_only", {}, small_grid)
        mixed = builtin_initial("stokes_only", {"atoms": [[0.0, 2.0, 1.0]], "sheet": {"x2": 0.5}}, small_grid)

        assert atom_only.atom_weights.tolist() == [1.0]
        assert mixed.atom_weights.tolist() == [1.0]
        assert mixed.sheet_weights.size == 200


class TestGaussianDipole:
    """Tests for the Gaussian stream function behind the trace-zero dipole."""

    def test_bump_profile(self) -> None:
        """Test the bump is 1 at the centre and exp(-1/2) one width out."""
        values = gaussian_bump(np.array([0.0, 0.4]), 0.4)

        np.testing.assert_allclose(values, [1.0, np.exp(-0.5)])

    def test_laplacian_matches_difference(self) -> None:
        """Test the closed-form Laplacian against a radial centered difference."""
        r, h = 0.3, 1e-4
        f = lambda s: gaussian_bump(np.asarray(s), 0.4)  # noqa: E731
        # Delta f = f'' + f'/r for radial functions
        fd = (f(r + h) - 2 * f(r) + f(r - h)) / h**2 + (f(r + h) - f(r - h)) / (2 * h * r)

        assert float(gaussian_bump_laplacian(np.asarray(r), 0.4)) == pytest.approx(float(fd), rel=1e-5)

    def test_stream_function_generates_dipole(self) -> None:
        """Test -Delta psi reproduces the dipole density and psi vanishes on x2 = 0."""
        grid = HalfPlaneGrid.symmetric(6.0, 8.0, 481, 321)
        psi = dipole_stream_function(grid)
        mu = builtin_initial("trace_zero_dipole", {}, grid)
        assert mu.density is not None
        omega = mu.density.values[1:-1, 1:-1]

        residual = np.max(np.abs(-five_point_laplacian(psi) - omega)) / np.max(np.abs(omega))

        assert residual < 1e-2
        assert np.max(np.abs(psi.values[0])) < 1e-15
