"""Tests for Fourier multipliers on the boundary line."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.special import dawsn

from halfplane_vorticity.exceptions import InvalidParameterError, InvalidTimeError, ResolutionError
from halfplane_vorticity.grid_core import LineSamples
from halfplane_vorticity.kernels import conj_poisson_Q, gauss1d, poisson_P
from halfplane_vorticity.line_ops import (
    apply_A,
    derivative,
    discrete_A_symbol,
    hilbert,
    inverse_cosine_transform,
    inverse_sine_transform,
    line_heat,
    padded_frequencies,
    poisson_semigroup,
)


@pytest.fixture
def bump() -> LineSamples:
    return LineSamples.from_function(-20.0, 20.0, 1024, lambda s: np.exp(-(s**2)))


@pytest.fixture
def packet() -> LineSamples:
    """Wave packet whose spectrum vanishes at xi = 0 to rounding level."""
    return LineSamples.from_function(-20.0, 20.0, 1024, lambda s: np.exp(-(s**2)) * np.cos(10 * s))


class TestHilbert:
    """Tests for the Hilbert transform."""

    def test_gaussian_gives_dawson(self, bump: LineSamples) -> None:
        """Test H(exp(-x^2)) = (2/sqrt(pi)) F(x) near the window centre."""
        inner = np.abs(bump.x) <= 5.0

        out = hilbert(bump).values

        np.testing.assert_allclose(out[inner], (2 / math.sqrt(math.pi) * dawsn(bump.x))[inner], atol=1e-3)

    def test_wave_packet(self, packet: LineSamples) -> None:
        """Test H(exp(-x^2) cos 10x) = exp(-x^2) sin 10x."""
        out = hilbert(packet).values

        np.testing.assert_allclose(out, np.exp(-(packet.x**2)) * np.sin(10 * packet.x), atol=1e-9)

    def test_poisson_to_conjugate(self) -> None:
        """Test H(P_1) = Q_1 on a wide window."""
        line = LineSamples.from_function(-200.0, 200.0, 16385, lambda s: poisson_P(s, 1.0))
        inner = np.abs(line.x) <= 100.0

        out = hilbert(line).values

        assert np.max(np.abs(out - np.asarray(conj_poisson_Q(line.x, 1.0)))[inner]) < 1e-4

    def test_square_is_minus_identity(self, packet: LineSamples) -> None:
        """Test H^2 = -I."""
        np.testing.assert_allclose(hilbert(hilbert(packet)).values, -packet.values, atol=1e-9)

    def test_isometry(self, packet: LineSamples) -> None:
        """Test H preserves the L^2 norm."""
        ratio = np.linalg.norm(hilbert(packet).values) / np.linalg.norm(packet.values)

        assert ratio == pytest.approx(1.0, abs=1e-10)

    def test_too_few_samples(self) -> None:
        """Test lines shorter than 16 samples are rejected."""
        with pytest.raises(ResolutionError):
            hilbert(LineSamples.from_function(0.0, 1.0, 8, np.sin))


class TestPoissonSemigroup:
    """Tests for e^{sA}."""

    def test_identity_at_zero(self, bump: LineSamples) -> None:
        """Test e^{0 A} is the identity."""
        np.testing.assert_array_equal(poisson_semigroup(bump, 0.0).values, bump.values)

    def test_negative_parameter(self, bump: LineSamples) -> None:
        """Test s < 0 is rejected."""
        with pytest.raises(InvalidParameterError):
            poisson_semigroup(bump, -0.1)

    def test_composition(self, packet: LineSamples) -> None:
        """Test e^{sA} e^{tA} = e^{(s+t)A}."""
        composed = poisson_semigroup(poisson_semigroup(packet, 0.2), 0.3)

        np.testing.assert_allclose(composed.values, poisson_semigroup(packet, 0.5).values, atol=1e-10)

    def test_generator(self, bump: LineSamples) -> None:
        """Test A = -H d1."""
        expected = -hilbert(derivative(bump)).values

        np.testing.assert_allclose(apply_A(bump).values, expected, atol=1e-10)


class TestLineHeat:
    """Tests for the line heat semigroup."""

    def test_gaussian_evolution(self) -> None:
        """Test e^{t d11} G0(., s) = G0(., s + t)."""
        g = LineSamples.from_function(-20.0, 20.0, 1024, lambda s: gauss1d(s, 0.5))

        out = line_heat(g, 0.25)

        np.testing.assert_allclose(out.values, gauss1d(g.x, 0.75), atol=1e-8)

    def test_routes_agree(self, bump: LineSamples) -> None:
        """Test spectral and quadrature evaluation agree."""
        spectral = line_heat(bump, 0.3, method="spectral").values
        quadrature = line_heat(bump, 0.3, method="quadrature").values

        np.testing.assert_allclose(spectral, quadrature, atol=1e-8)

    def test_zero_time(self, bump: LineSamples) -> None:
        """Test t = 0 returns the data and t < 0 is rejected."""
        np.testing.assert_array_equal(line_heat(bump, 0.0).values, bump.values)
        with pytest.raises(InvalidTimeError):
            line_heat(bump, -1.0)


class TestSymbolsAndTransforms:
    """Tests for symbols and pointwise inverse transforms."""

    def test_discrete_generator_converges(self) -> None:
        """Test the discrete symbol tends to -|xi| under refinement."""
        xi = np.array([0.5, 1.0, 2.0])

        np.testing.assert_allclose(discrete_A_symbol(xi, 1e-3, 1e-3), -xi, rtol=1e-5)

    def test_frequencies_read_only(self) -> None:
        """Test the cached frequency array cannot be modified."""
        xi = padded_frequencies(64, 0.1)

        with pytest.raises(ValueError):
            xi[0] = 1.0

    def test_inverse_cosine_transform(self) -> None:
        """Test the inverse transform of exp(-xi^2) is G0(x, 1)."""
        x = np.linspace(-4, 4, 9)

        out = inverse_cosine_transform(lambda xi: np.exp(-(xi**2)), x, 12.0)

        np.testing.assert_allclose(out, gauss1d(x, 1.0), atol=1e-12)

    def test_inverse_sine_transform(self) -> None:
        """Test the odd transform of xi exp(-xi^2)."""
        x = np.linspace(-4, 4, 9)

        out = inverse_sine_transform(lambda xi: xi * np.exp(-(xi**2)), x, 12.0)

        np.testing.assert_allclose(out, x * np.exp(-(x**2) / 4) / (4 * math.sqrt(math.pi)), atol=1e-12)

    def test_panel_rule_exact_for_polynomials(self) -> None:
        """Test an n-node panel rule integrates xi^(2n - 1) exactly."""
        out = inverse_cosine_transform(lambda xi: xi**5, np.zeros(1), 2.0, nodes_per_panel=3)

        assert float(out[0]) == pytest.approx(2.0**6 / (6 * math.pi), rel=1e-13)
