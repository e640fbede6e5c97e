"""Fourier multipliers on the boundary line.

Samples are zero-padded by ``pad_factor`` before the real FFT to keep the
periodic images of slowly decaying data (the 1/x tails of P_s and Q_s) away
from the window; results are restricted back to the original samples.

Symbols are written for ``g^(xi) = int g(x) exp(-i x xi) dx``:

* Hilbert transform ``H``: ``-i sgn(xi)``
* Poisson semigroup ``e^{sA}``: ``exp(-s |xi|)``
* line heat semigroup ``e^{t d11}``: ``exp(-t xi^2)``
* generator ``A = -H d1``: ``-|xi|``

The ``xi = 0`` mode of ``H`` and ``A`` and the Nyquist mode of every odd
symbol are set to zero.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from functools import lru_cache
from typing import TYPE_CHECKING, Literal

import numpy as np
from scipy import fft
from scipy.special import roots_legendre

from halfplane_vorticity.exceptions import InvalidParameterError, ResolutionError
from halfplane_vorticity.grid_core import LineSamples
from halfplane_vorticity.kernels import check_time, gauss1d

if TYPE_CHECKING:
    from numpy.typing import NDArray

    FloatArray = NDArray[np.float64]
    ComplexArray = NDArray[np.complex128]

    Symbol = Callable[[FloatArray], FloatArray | ComplexArray]

logger = logging.getLogger(__name__)

DEFAULT_PAD = 4
MIN_SAMPLES = 16


@lru_cache(maxsize=64)
def padded_frequencies(n_pad: int, h: float) -> FloatArray:
    """Non-negative angular frequencies of an ``rfft`` of length ``n_pad``.

    The array is shared between callers and therefore read-only.
    """
    xi = 2 * math.pi * fft.rfftfreq(n_pad, d=h)
    xi.flags.writeable = False
    return xi


def _nyquist_mask(n_pad: int, size: int) -> FloatArray:
    mask = np.ones(size)
    if n_pad % 2 == 0:
        mask[-1] = 0.0
    return mask


def hilbert_symbol(xi: FloatArray) -> ComplexArray:
    return -1j * np.sign(xi)


def poisson_symbol(xi: FloatArray, s: float) -> FloatArray:
    return np.exp(-s * np.abs(xi))


def heat_symbol(xi: FloatArray, t: float) -> FloatArray:
    return np.exp(-t * xi**2)


def A_symbol(xi: FloatArray) -> FloatArray:
    return -np.abs(xi)


def derivative_symbol(xi: FloatArray) -> ComplexArray:
    return 1j * xi


def apply_multiplier(
    g: LineSamples,
    symbol: Symbol,
    *,
    pad_factor: int = DEFAULT_PAD,
    odd: bool = False,
) -> LineSamples:
    """Apply a Fourier multiplier with real-valued output.

    Args:
        g: Input samples.
        symbol: Function of the angular frequency array (``xi >= 0``).
        pad_factor: Zero-padding factor (at least 1).
        odd: Zero the Nyquist bin, required for odd symbols.

    Raises:
        ResolutionError: If ``g`` has fewer than 16 samples.
    """
    if g.n < MIN_SAMPLES:
        raise ResolutionError(g.n, MIN_SAMPLES)
    if pad_factor < 1:
        raise InvalidParameterError(f"pad_factor must be >= 1, got {pad_factor}")
    n_pad = pad_factor * g.n
    xi = padded_frequencies(n_pad, g.h)
    spectrum = fft.rfft(g.values, n_pad)
    m = symbol(xi)
    if odd:
        m = m * _nyquist_mask(n_pad, xi.size)
    out = fft.irfft(spectrum * m, n_pad)[: g.n]
    return g.with_values(out)


def hilbert(g: LineSamples, *, pad_factor: int = DEFAULT_PAD) -> LineSamples:
    """Hilbert transform with multiplier ``-i sgn(xi)``."""
    return apply_multiplier(g, hilbert_symbol, pad_factor=pad_factor, odd=True)


def poisson_semigroup(g: LineSamples, s: float, *, pad_factor: int = DEFAULT_PAD) -> LineSamples:
    """Poisson semigroup ``e^{sA} g``.

    Raises:
        InvalidParameterError: If ``s < 0``.
    """
    if s < 0:
        raise InvalidParameterError(f"Poisson semigroup parameter must be >= 0, got {s}")
    if s == 0:
        return g.with_values(g.values.copy())
    return apply_multiplier(g, lambda xi: poisson_symbol(xi, s), pad_factor=pad_factor)


def line_heat(
    g: LineSamples,
    t: float,
    *,
    pad_factor: int = DEFAULT_PAD,
    method: Literal["auto", "spectral", "quadrature"] = "auto",
) -> LineSamples:
    """Line heat semigroup ``e^{t d11} g`` (convolution with ``gauss1d(., t)``).

    ``auto`` switches to direct quadrature once the kernel is wide enough to
    wrap around the padded period.
    """
    check_time(t, allow_zero=True)
    if t == 0:
        return g.with_values(g.values.copy())
    if method == "auto":
        width = g.x1_max - g.x1_min
        method = "quadrature" if 8 * math.sqrt(t) > 0.5 * (pad_factor - 1) * width else "spectral"
    if method == "spectral":
        return apply_multiplier(g, lambda xi: heat_symbol(xi, t), pad_factor=pad_factor)
    logger.debug("line_heat: direct quadrature for t=%g on %d samples", t, g.n)
    offsets = g.h * np.arange(-(g.n - 1), g.n)
    kernel = np.asarray(gauss1d(offsets, t))
    w = np.full(g.n, g.h)
    w[[0, -1]] *= 0.5
    out = np.convolve(g.values * w, kernel, mode="full")[g.n - 1 : 2 * g.n - 1]
    return g.with_values(out)


def apply_A(g: LineSamples, *, pad_factor: int = DEFAULT_PAD) -> LineSamples:
    """Poisson generator ``A = -H d1`` (multiplier ``-|xi|``)."""
    return apply_multiplier(g, A_symbol, pad_factor=pad_factor)


def derivative(g: LineSamples, *, pad_factor: int = DEFAULT_PAD) -> LineSamples:
    """Spectral derivative ``d1 g``."""
    return apply_multiplier(g, derivative_symbol, pad_factor=pad_factor, odd=True)


def discrete_A_symbol(xi: FloatArray, h1: float, h2: float) -> FloatArray:
    """Generator of the 5-point discrete harmonic extension.

    ``-sinh(theta)/h2`` with ``cosh(theta) = 1 + (h2/h1)^2 (1 - cos(xi h1))``;
    tends to ``-|xi|`` as the mesh is refined.
    """
    s = (2 - 2 * np.cos(xi * h1)) / h1**2
    theta = np.arccosh(1 + 0.5 * h2**2 * s)
    return -np.sinh(theta) / h2


@lru_cache(maxsize=16)
def _legendre(n: int) -> tuple[FloatArray, FloatArray]:
    g, w = roots_legendre(n)
    return g, w


def _frequency_panels(x: FloatArray, xi_max: float, nodes_per_panel: int) -> tuple[FloatArray, FloatArray]:
    """Composite Gauss-Legendre nodes on ``[0, xi_max]``.

    The panel count follows the largest phase ``xi_max * |x|`` so oscillations
    stay resolved.
    """
    phase = xi_max * float(np.max(np.abs(x), initial=0.0))
    panels = max(8, int(math.ceil(phase / math.pi)) + 8)
    g, w = _legendre(nodes_per_panel)
    edges = np.linspace(0.0, xi_max, panels + 1)
    half = 0.5 * np.diff(edges)
    xi = (edges[:-1, None] + half[:, None] * (g[None, :] + 1)).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return xi, weights


def inverse_cosine_transform(
    spectrum: Callable[[FloatArray], FloatArray],
    x: FloatArray,
    xi_max: float,
    *,
    nodes_per_panel: int = 16,
) -> FloatArray:
    """Evaluate ``(1/pi) int_0^xi_max k^(xi) cos(xi x) dxi`` for even real spectra.

    ``spectrum`` may return an array whose leading axes match ``x`` followed
    by the frequency axis.
    """
    x = np.asarray(x, dtype=np.float64)
    xi, weights = _frequency_panels(x, xi_max, nodes_per_panel)
    values = spectrum(xi)
    return np.sum(values * weights * np.cos(x[..., None] * xi), axis=-1) / math.pi


def inverse_sine_transform(
    spectrum: Callable[[FloatArray], FloatArray],
    x: FloatArray,
    xi_max: float,
    *,
    nodes_per_panel: int = 16,
) -> FloatArray:
    """Evaluate ``(1/pi) int_0^xi_max s(xi) sin(xi x) dxi`` for odd real ``s``.

    A kernel with transform ``i s(xi)`` equals minus this integral.
    """
    x = np.asarray(x, dtype=np.float64)
    xi, weights = _frequency_panels(x, xi_max, nodes_per_panel)
    values = spectrum(xi)
    return np.sum(values * weights * np.sin(x[..., None] * xi), axis=-1) / math.pi
