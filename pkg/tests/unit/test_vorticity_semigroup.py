"""Tests for the vorticity semigroup kernels and gridded operators."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate

from halfplane_vorticity.exceptions import InvalidParameterError, InvalidTimeError
from halfplane_vorticity.grid_core import HalfPlaneGrid, LineSamples, VorticityMeasure
from halfplane_vorticity.kernels import gauss1d, gauss2d
from halfplane_vorticity.scenarios import builtin_initial
from halfplane_vorticity.vorticity_semigroup import (
    KernelConfig,
    apply_T0,
    apply_T_composite,
    apply_T_kernel,
    eta_bound,
    grad_y_kernel_W,
    green_matrix,
    green_star_11,
    kernel_W,
    kernel_W0,
    kernel_W_parts,
    kernel_W_star,
    kernel_W_tilde,
    kernel_W_tr,
    periodic_images,
)


@pytest.fixture
def pairs() -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(11)
    x = np.column_stack([rng.uniform(-2, 2, 12), rng.uniform(0.1, 2, 12)])
    y = np.column_stack([rng.uniform(-2, 2, 12), rng.uniform(0.1, 2, 12)])
    return x, y


def _rel_sup(a: object, b: object) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))


class TestKernelConfig:
    """Tests for KernelConfig validation."""

    def test_defaults(self) -> None:
        """Test the default discretization."""
        cfg = KernelConfig()

        assert cfg.z2_nodes == 32
        assert cfg.pad_factor == 4
        assert cfg.method == "quadrature"

    @pytest.mark.parametrize(
        "kwargs",
        [{"z2_nodes": 8}, {"pad_factor": 2}, {"tail_extent": 0.0}, {"method": "series"}],
    )
    def test_invalid(self, kwargs: dict[str, object]) -> None:
        """Test out-of-range settings are rejected."""
        with pytest.raises(InvalidParameterError):
            KernelConfig(**kwargs)  # type: ignore[arg-type]


class TestPointwiseKernels:
    """Tests for W, its components and the Green matrix."""

    @pytest.mark.parametrize("lam", [0.5, 2.0])
    def test_parabolic_scaling(self, pairs: tuple[np.ndarray, np.ndarray], lam: float) -> None:
        """Test lam^2 W(lam x, lam y, lam^2 t) = W(x, y, t)."""
        x, y = pairs

        scaled = lam**2 * np.asarray(kernel_W(lam * x, lam * y, lam**2 * 0.3))

        assert _rel_sup(scaled, kernel_W(x, y, 0.3)) < 1e-10

    def test_boundary_source_vanishes(self) -> None:
        """Test W(x, (y1, 0), t) = 0."""
        x = np.array([[0.3, 0.0], [0.1, 0.5], [-1.2, 1.4]])

        values = kernel_W(x, [0.2, 0.0], 0.4)

        np.testing.assert_allclose(values, 0.0, atol=1e-10)

    def test_w_tilde_zero_on_boundary_source(self) -> None:
        """Test W~ vanishes identically when y2 = 0."""
        values = kernel_W_tilde(np.array([[0.3, 0.2], [1.0, 1.0]]), [0.0, 0.0], 0.5)

        np.testing.assert_array_equal(values, 0.0)

    def test_w_tilde_routes_agree(self, pairs: tuple[np.ndarray, np.ndarray]) -> None:
        """Test quadrature and closed-form W~ agree."""
        x, y = pairs

        quadrature = kernel_W_tilde(x, y, 0.5, method="quadrature")
        spectral = kernel_W_tilde(x, y, 0.5, method="spectral")

        np.testing.assert_allclose(quadrature, spectral, atol=1e-8)

    def test_trace_term_at_boundary_source(self) -> None:
        """Test W_tr(x, (y1, 0), t) = -2 G0(x2, t) G0(x1 - y1, t)."""
        x = np.array([[0.4, 0.3], [-0.7, 1.1]])

        values = kernel_W_tr(x, [0.1, 0.0], 0.5)

        expected = -2 * np.asarray(gauss1d(x[:, 1], 0.5)) * np.asarray(gauss1d(x[:, 0] - 0.1, 0.5))
        np.testing.assert_allclose(values, expected, atol=1e-10)

    def test_parts(self, pairs: tuple[np.ndarray, np.ndarray]) -> None:
        """Test the components add up to W and W* = Gamma* + W~."""
        x, y = pairs

        parts = kernel_W_parts(x, y, 0.7)

        np.testing.assert_allclose(parts.total, kernel_W(x, y, 0.7), rtol=1e-13)
        np.testing.assert_allclose(parts.w_star, kernel_W_star(x, y, 0.7), rtol=1e-12, atol=1e-15)

    def test_w_star_is_minus_transposed_green(self, pairs: tuple[np.ndarray, np.ndarray]) -> None:
        """Test W*(x, y, t) = -G*11(y, x, t)."""
        x, y = pairs

        w_star = kernel_W_star(x, y, 1.0, method="spectral")

        assert _rel_sup(w_star, -np.asarray(green_star_11(y, x, 1.0))) < 1e-4

    def test_gradient_matches_difference(self) -> None:
        """Test (d/dy1 W, d/dy2 W) against centered differences."""
        x, y, t, h = np.array([0.3, 0.7]), np.array([-0.2, 0.9]), 0.5, 1e-4
        e1, e2 = np.array([h, 0.0]), np.array([0.0, h])

        def W(point: np.ndarray) -> float:
            return float(kernel_W(x, point, t, method="spectral"))

        g1, g2 = grad_y_kernel_W(x, y, t)

        assert g1 == pytest.approx((W(y + e1) - W(y - e1)) / (2 * h), rel=1e-5, abs=1e-8)
        assert g2 == pytest.approx((W(y + e2) - W(y - e2)) / (2 * h), rel=1e-5, abs=1e-8)

    def test_green_matrix_structure(self) -> None:
        """Test G12 = 0 and G22 vanishes on the boundary."""
        x = np.array([[0.4, 0.0], [-0.3, 0.8]])

        G = green_matrix(x, [0.1, 0.6], 0.5)

        assert G.shape == (2, 2, 2)
        np.testing.assert_array_equal(G[..., 0, 1], 0.0)
        assert G[0, 1, 1] == pytest.approx(0.0, abs=1e-15)

    def test_lower_half_plane_rejected(self) -> None:
        """Test arguments below the boundary are rejected."""
        with pytest.raises(InvalidParameterError):
            kernel_W([0.0, -0.5], [0.0, 1.0], 0.5)

    def test_time_must_be_positive(self) -> None:
        """Test t <= 0 is rejected."""
        with pytest.raises(InvalidTimeError):
            kernel_W([0.0, 0.5], [0.0, 1.0], 0.0)


class TestWTildeQuadrature:
    """Tests of W~ against direct quadrature in physical space."""

    @staticmethod
    def _direct(x: tuple[float, float], y: tuple[float, float], t: float) -> float:
        """``4 int_0^y2 int Gamma(x - z*, t) d11 E(z - y) dz``, integrated by parts once in ``z1``."""
        reach = 12.0 * math.sqrt(t)

        def integrand(z2: float, z1: float) -> float:
            image = float(gauss2d((x[0] - z1, x[1] + z2), t))
            a, b = z1 - y[0], z2 - y[1]
            return 4.0 * image * (x[0] - z1) / (2 * t) * a / (2 * math.pi * (a**2 + b**2))

        total = 0.0
        for lo, hi in ((x[0] - reach, y[0]), (y[0], x[0] + reach)):
            value, _ = integrate.dblquad(integrand, lo, hi, 0.0, y[1], epsabs=1e-11, epsrel=1e-9)
            total += value
        return total

    @pytest.mark.parametrize(
        ("x", "y", "t"),
        [((0.3, 0.5), (-0.2, 0.8), 1.0), ((1.0, 0.2), (0.4, 1.5), 0.5), ((-0.6, 1.1), (0.2, 0.3), 2.0)],
    )
    def test_reduced_form_matches_direct_quadrature(self, x: tuple[float, float], y: tuple[float, float], t: float) -> None:
        """Test both transform routes reproduce the two-dimensional integral."""
        direct = self._direct(x, y, t)

        for method in ("quadrature", "spectral"):
            value = float(kernel_W_tilde(x, y, t, method=method))
            assert value == pytest.approx(direct, rel=1e-3, abs=1e-8)

    @pytest.mark.parametrize("y2", [0.1, 1.0, 5.0])
    def test_l1_norm_bounded_by_eta(self, y2: float) -> None:
        """Test int |W~(x, y, 1)| dx <= 4 eta(y2)."""
        x1 = np.linspace(-20.0, 20.0, 161)
        x2 = np.linspace(0.0, 10.0, 41)
        rows = [
            integrate.trapezoid(np.abs(np.asarray(kernel_W_tilde(np.column_stack([x1, np.full_like(x1, h)]), (0.0, y2), 1.0))), x1)
            for h in x2
        ]

        assert float(integrate.trapezoid(rows, x2)) <= 4 * eta_bound(y2)


class TestEtaBound:
    """Tests for eta_bound."""

    def test_zero(self) -> None:
        """Test eta(0) = 0."""
        assert eta_bound(0.0) == 0.0

    def test_increasing_and_bounded(self) -> None:
        """Test eta increases towards 1 / sqrt(pi)."""
        values = [eta_bound(y2) for y2 in (0.1, 1.0, 5.0, 50.0)]

        assert all(a < b for a, b in zip(values, values[1:], strict=False))
        assert values[-1] == pytest.approx(1 / math.sqrt(math.pi), rel=1e-8)

    def test_negative(self) -> None:
        """Test y2 < 0 is rejected."""
        with pytest.raises(InvalidParameterError):
            eta_bound(-1.0)


class TestGriddedOperators:
    """Tests for T(t) on grids."""

    def test_annihilates_boundary_layers(self, small_grid: HalfPlaneGrid) -> None:
        """Test both routes send a boundary layer to zero."""
        layer = LineSamples(small_grid.x1_min, small_grid.x1_max, np.exp(-(small_grid.x1**2)))
        mu = VorticityMeasure(boundary_sheet=layer)

        direct = apply_T_kernel(mu, 0.25, small_grid)
        composite = apply_T_composite(mu, 0.25, small_grid)

        np.testing.assert_allclose(direct.values, 0.0, atol=1e-12)
        np.testing.assert_allclose(composite.values, 0.0, atol=1e-10)

    def test_kernel_path_matches_composite(self, small_grid: HalfPlaneGrid, unit_atom: VorticityMeasure) -> None:
        """Test direct summation against W agrees with the three-term assembly."""
        direct = apply_T_kernel(unit_atom, 0.25, small_grid)
        composite = apply_T_composite(unit_atom, 0.25, small_grid)

        assert _rel_sup(direct.values, composite.values) < 1e-3

    def test_zero_measure(self, small_grid: HalfPlaneGrid) -> None:
        """Test T(t) 0 = 0."""
        out = apply_T_kernel(VorticityMeasure(), 0.5, small_grid)

        np.testing.assert_array_equal(out.values, 0.0)

    @pytest.mark.slow
    def test_trace_zero_semigroup_agrees(self, medium_grid: HalfPlaneGrid) -> None:
        """Test T0(t) = T(t) on the trace-zero dipole."""
        dipole = builtin_initial("trace_zero_dipole", {}, medium_grid)
        assert dipole.density is not None
        mass = float(np.sum(medium_grid.weights * np.abs(dipole.density.values)))

        gap = apply_T0(dipole, 0.25, medium_grid) - apply_T_composite(dipole, 0.25, medium_grid)

        assert float(np.sum(medium_grid.weights * np.abs(gap.values))) < 1e-3 * mass

    def test_kernel_path_matches_composite_on_default_grid(self, unit_atom: VorticityMeasure) -> None:
        """Test the two routes agree on the default grid, boundary row and window edges included."""
        grid = HalfPlaneGrid.default()

        direct = apply_T_kernel(unit_atom, 0.25, grid)
        composite = apply_T_composite(unit_atom, 0.25, grid)

        assert _rel_sup(direct.values, composite.values) < 1e-3
        assert _rel_sup(direct.values[0, [0, -1]], composite.values[0, [0, -1]]) < 1e-2


class TestPeriodicImages:
    """Tests for periodic_images."""

    @pytest.mark.parametrize("s", [0.0, 0.3, -1.7, 2.5, 4.9])
    def test_matches_direct_sum(self, s: float) -> None:
        """Test the closed form against the sum over k != 0 of (s + k P)^-2."""
        period = 10.0
        k = np.arange(1, 1_000_001, dtype=np.float64)
        direct = float(np.sum(1.0 / (s + k * period) ** 2) + np.sum(1.0 / (s - k * period) ** 2))

        assert float(periodic_images(s, period)) == pytest.approx(direct, rel=1e-5)

    def test_smooth_across_series_switch(self) -> None:
        """Test the small-offset series joins the closed form continuously."""
        period = 10.0
        edge = 1e-3 * period / math.pi
        below, above = periodic_images(np.array([0.999 * edge, 1.001 * edge]), period)

        assert below == pytest.approx(above, rel=1e-6)
        assert float(periodic_images(0.0, period)) == pytest.approx(math.pi**2 / (3 * period**2), rel=1e-12)

    def test_even(self) -> None:
        """Test the image sum is even in the offset."""
        s = np.linspace(0.1, 4.0, 7)

        np.testing.assert_allclose(periodic_images(s, 10.0), periodic_images(-s, 10.0), rtol=1e-14)


class TestTraceZeroKernel:
    """Tests for kernel_W0."""

    def test_parabolic_scaling(self, pairs: tuple[np.ndarray, np.ndarray]) -> None:
        """Test lam^2 W0(lam x, lam y, lam^2 t) = W0(x, y, t)."""
        x, y = pairs
        lam = 1.7

        scaled = lam**2 * np.asarray(kernel_W0(lam * x, lam * y, lam**2 * 0.4))

        assert _rel_sup(scaled, kernel_W0(x, y, 0.4)) < 1e-6

    def test_differs_from_W_by_harmonic_term(self) -> None:
        """Test the 5-point y-Laplacian of W0 - W is small against that of W0."""
        h = 1e-2
        x = np.array([0.3, 0.8])
        y = np.array([0.5, 0.6]) + np.array([[0.0, 0.0], [h, 0.0], [-h, 0.0], [0.0, h], [0.0, -h]])
        stencil = np.array([-4.0, 1.0, 1.0, 1.0, 1.0]) / h**2

        w0 = float(np.asarray(kernel_W0(x, y, 1.0)) @ stencil)
        w = float(np.asarray(kernel_W(x, y, 1.0, method="spectral")) @ stencil)

        assert abs(w0 - w) < 1e-3 * abs(w0)

    def test_far_field_mass_grows(self) -> None:
        """Test W0(x, ., 1) is not integrable: every dyadic annulus carries about the same mass."""
        x = np.array([0.0, 1.0])
        masses = []
        for radius in (10.0, 20.0, 40.0):
            theta = np.linspace(0.05, math.pi - 0.05, 64)
            y = radius * np.column_stack([np.cos(theta), np.sin(theta)])
            masses.append(radius**2 * float(np.mean(np.abs(np.asarray(kernel_W0(x, y, 1.0))))))

        assert masses[2] > 0.5 * masses[0]
