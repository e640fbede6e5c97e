"""The vorticity semigroup T(t) of the Stokes flow in the half plane.

Every kernel here is handled through its Fourier transform in ``x1 - y1``
(``hat`` functions of ``xi >= 0``, target heights ``x2`` and source heights
``y2``). Pointwise values come from inverse cosine/sine transforms after
rescaling to ``t = 1`` with ``W(x, y, t) = t^-1 W(x / sqrt(t), y / sqrt(t), 1)``.
Gridded evaluation goes row by row through padded real FFTs
(:class:`RowKernelOperator`).

Components of ``W = Gamma(x - y) + Gamma(x - y*) + W~ + W_tr``:

* ``W~`` transform ``-2 |xi| e^{-t xi^2} int_0^{y2} G0(x2 + z) e^{-(y2 - z)|xi|} dz``,
  evaluated either by Gauss-Legendre quadrature in ``z`` or in closed form
  through ``erfc``;
* ``W_tr`` transform ``-2 G0(x2, t) e^{-t xi^2 - y2 |xi|}``.

At ``y2 = 0`` the Poisson kernel in ``W_tr`` is its limit, the Dirac mass, and
``W`` vanishes identically: boundary layers carry no velocity and ``T(t)``
annihilates them.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Literal, NamedTuple

import numpy as np
from scipy import fft, integrate
from scipy.special import erf, erfc, roots_legendre

from halfplane_vorticity.biot_savart import boundary_trace
from halfplane_vorticity.exceptions import InvalidParameterError
from halfplane_vorticity.grid_core import HalfPlaneGrid, LineSamples, ScalarField, VorticityMeasure
from halfplane_vorticity.kernels import check_time, components, gauss1d, gauss2d, scalar_or_array
from halfplane_vorticity.line_ops import (
    inverse_cosine_transform,
    inverse_sine_transform,
    line_heat,
    padded_frequencies,
)
from halfplane_vorticity.semigroups import heat_neumann, resample

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    FloatArray = NDArray[np.float64]
    ComplexArray = NDArray[np.complex128]

    Hat = Callable[[FloatArray, FloatArray, FloatArray], FloatArray | ComplexArray]
    Tail = Callable[[FloatArray, FloatArray], FloatArray]

logger = logging.getLogger(__name__)

WTildeMethod = Literal["quadrature", "spectral"]


@dataclass(frozen=True)
class KernelConfig:
    """Discretization of the kernel evaluations.

    Attributes:
        z2_nodes: Gauss-Legendre nodes for the ``z`` integral in ``W~``.
        pad_factor: Zero-padding factor of the row FFTs.
        tail_extent: Gaussian tails are cut at ``tail_extent * sqrt(t)`` in
            space and ``tail_extent / sqrt(t)`` in frequency.
        method: Evaluation route of ``W~`` for the direct kernel path.
    """

    z2_nodes: int = 32
    pad_factor: int = 4
    tail_extent: float = 12.0
    method: WTildeMethod = "quadrature"

    def __post_init__(self) -> None:
        if self.z2_nodes < 16:
            raise InvalidParameterError(f"z2_nodes must be >= 16, got {self.z2_nodes}")
        if self.pad_factor < 4:
            raise InvalidParameterError(f"pad_factor must be >= 4, got {self.pad_factor}")
        if not self.tail_extent > 0:
            raise InvalidParameterError(f"tail_extent must be positive, got {self.tail_extent}")
        if self.method not in ("quadrature", "spectral"):
            raise InvalidParameterError(f"Unknown W~ method: {self.method}")


DEFAULT_CONFIG = KernelConfig()


class KernelParts(NamedTuple):
    """``W`` and its four components at the same points."""

    gamma: float | FloatArray
    gamma_star: float | FloatArray
    w_tilde: float | FloatArray
    w_tr: float | FloatArray

    @property
    def total(self) -> float | FloatArray:
        return self.gamma + self.gamma_star + self.w_tilde + self.w_tr

    @property
    def w_star(self) -> float | FloatArray:
        return self.gamma_star + self.w_tilde


# ---------------------------------------------------------------------------
# Transforms in x1 - y1
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _unit_legendre(n: int) -> tuple[FloatArray, FloatArray]:
    """Gauss-Legendre nodes and weights on ``[0, 1]``."""
    g, w = roots_legendre(n)
    return 0.5 * (g + 1.0), 0.5 * w


def _col(a: FloatArray) -> FloatArray:
    return a[:, None]


def reduced_hat(
    xi: FloatArray, base: FloatArray, upper: FloatArray, t: float, nodes: int, extent: float
) -> FloatArray:
    """``e^{-t xi^2} int_0^upper G0(base + w, t) e^{-(upper - w) xi} dw``, shape ``(m, n_xi)``.

    The integrand is negligible once ``base + w`` passes ``extent * sqrt(t)``,
    so the range is cut there before the Gauss-Legendre rule is applied.
    """
    sigma, weights = _unit_legendre(nodes)
    cut = np.minimum(upper, np.maximum(0.0, extent * math.sqrt(t) - base))
    w = _col(cut) * sigma[None, :]
    g = np.asarray(gauss1d(_col(base) + w, t)) * (_col(cut) * weights[None, :])
    decay = np.exp(-(_col(upper) - w)[..., None] * xi)
    return np.exp(-t * xi**2) * np.einsum("mk,mkf->mf", g, decay)


def gamma_pair_hat(xi: FloatArray, x2: FloatArray, y2: FloatArray, t: float, parity: float = 1.0) -> FloatArray:
    """Transform of ``Gamma(x - y, t) + parity * Gamma(x - y*, t)``."""
    profile = np.asarray(gauss1d(x2 - y2, t)) + parity * np.asarray(gauss1d(x2 + y2, t))
    return _col(profile) * np.exp(-t * xi**2)


def w_tilde_hat_spectral(xi: FloatArray, x2: FloatArray, y2: FloatArray, t: float) -> FloatArray:
    """Closed form of the ``W~`` transform.

    ``-|xi| e^{-|xi|(x2 + y2)} [erfc(x2 / 2 sqrt(t) - |xi| sqrt(t)) - erfc((x2 + y2) / 2 sqrt(t) - |xi| sqrt(t))]``,
    bounded for every argument.
    """
    rt = math.sqrt(t)
    z = _col(x2 + y2)
    u1 = _col(x2) / (2 * rt) - xi * rt
    u2 = z / (2 * rt) - xi * rt
    return -xi * np.exp(-xi * z) * (erfc(u1) - erfc(u2))


def w_tilde_hat_quadrature(
    xi: FloatArray, x2: FloatArray, y2: FloatArray, t: float, cfg: KernelConfig
) -> FloatArray:
    """``W~`` transform by Gauss-Legendre quadrature of the reduced ``z`` integral."""
    return -2.0 * xi * reduced_hat(xi, x2, y2, t, cfg.z2_nodes, cfg.tail_extent)


def w_tr_hat(xi: FloatArray, x2: FloatArray, y2: FloatArray, t: float) -> FloatArray:
    """``-2 G0(x2, t) e^{-t xi^2} e^{-y2 |xi|}``, the continuous ``y2 -> 0`` limit included."""
    return -2.0 * _col(np.asarray(gauss1d(x2, t))) * np.exp(-t * xi**2 - _col(y2) * xi)


def w0_correction_hat(xi: FloatArray, x2: FloatArray, y2: FloatArray, t: float) -> FloatArray:
    """Non-Gaussian part of the trace-zero kernel: ``-|xi| e^{-|xi| z} erfc(|xi| sqrt(t) - z / 2 sqrt(t))``."""
    rt = math.sqrt(t)
    z = _col(x2 + y2)
    return -xi * np.exp(-xi * z) * erfc(xi * rt - z / (2 * rt))


def _halo(x2: FloatArray, y2: FloatArray, t: float) -> FloatArray:
    """``erf((x2 + y2) / 2 sqrt(t)) - erf(x2 / 2 sqrt(t))``, twice the Gaussian mass between the heights."""
    rt = 2.0 * math.sqrt(t)
    return erf((x2 + y2) / rt) - erf(x2 / rt)


def w_tilde_tail(x2: FloatArray, y2: FloatArray, t: float) -> FloatArray:
    """``|xi|`` coefficient of the ``W~`` transform at ``xi = 0``."""
    return -_halo(np.asarray(x2), np.asarray(y2), t)


def w_tr_tail(x2: FloatArray, y2: FloatArray, t: float) -> FloatArray:
    """``|xi|`` coefficient of the ``W_tr`` transform at ``xi = 0``."""
    return 2.0 * np.asarray(gauss1d(x2, t)) * np.asarray(y2)


def w0_correction_tail(x2: FloatArray, y2: FloatArray, t: float) -> FloatArray:
    """``|xi|`` coefficient of the trace-zero correction at ``xi = 0``."""
    return -(1.0 + erf((np.asarray(x2) + np.asarray(y2)) / (2.0 * math.sqrt(t))))


def w_tail(t: float) -> Tail:
    """``|xi|`` coefficient of the full ``W`` transform, which fixes its ``s^-2`` decay in ``x1 - y1``."""

    def tail(x2: FloatArray, y2: FloatArray) -> FloatArray:
        return w_tilde_tail(x2, y2, t) + w_tr_tail(x2, y2, t)

    return tail


def _w_tilde_hat(method: WTildeMethod, cfg: KernelConfig) -> Callable[[FloatArray, FloatArray, FloatArray, float], FloatArray]:
    if method == "spectral":
        return w_tilde_hat_spectral
    return lambda xi, x2, y2, t: w_tilde_hat_quadrature(xi, x2, y2, t, cfg)


def w_hat(t: float, cfg: KernelConfig, method: WTildeMethod | None = None) -> Hat:
    """Transform of the full kernel ``W`` at time ``t``."""
    tilde = _w_tilde_hat(method or cfg.method, cfg)

    def hat(xi: FloatArray, x2: FloatArray, y2: FloatArray) -> FloatArray:
        return gamma_pair_hat(xi, x2, y2, t) + tilde(xi, x2, y2, t) + w_tr_hat(xi, x2, y2, t)

    return hat


def grad_y_pair_hat(t: float) -> Hat:
    """Transforms of ``d/dy1 W`` and ``d/dy2 W`` stacked as ``(2, n2, n_xi)``.

    ``d/dy1`` multiplies the transform by ``-i xi``. In ``y2`` the Gaussian
    pair is differentiated directly, ``W_tr`` picks up ``-|xi|`` and
    ``d/dy2 W~ = -|xi| W~ - 2 |xi| G0(x2 + y2, t) e^{-t xi^2}``. ``W~`` is
    taken in closed form and evaluated once for both components.
    """

    def hat(xi: FloatArray, x2: FloatArray, y2: FloatArray) -> ComplexArray:
        gauss = np.exp(-t * xi**2)
        dm = x2 - y2
        dp = x2 + y2
        g_minus = np.asarray(gauss1d(dm, t))
        g_plus = np.asarray(gauss1d(dp, t))
        w_t = w_tilde_hat_spectral(xi, x2, y2, t)
        w_tr = w_tr_hat(xi, x2, y2, t)
        full = _col(g_minus + g_plus) * gauss + w_t + w_tr
        profile = dm / (2 * t) * g_minus - dp / (2 * t) * g_plus
        d_y2 = _col(profile) * gauss - xi * (w_t + w_tr) - 2.0 * xi * _col(g_plus) * gauss
        return np.stack([-1j * xi * full, d_y2])

    return hat


def grad_y_tail(t: float) -> Tail:
    """``|xi|`` coefficients of :func:`grad_y_pair_hat`; the odd ``d/dy1`` has none."""

    def tail(x2: FloatArray, y2: FloatArray) -> FloatArray:
        c2 = 2.0 * (np.asarray(gauss1d(x2, t)) - np.asarray(gauss1d(np.asarray(x2) + np.asarray(y2), t)))
        return np.stack([np.zeros_like(c2), c2])

    return tail


def grad_y_hats(t: float) -> tuple[Hat, Hat]:
    """The two components of :func:`grad_y_pair_hat` as separate transforms."""
    pair = grad_y_pair_hat(t)

    def d_y1(xi: FloatArray, x2: FloatArray, y2: FloatArray) -> ComplexArray:
        return pair(xi, x2, y2)[0]

    def d_y2(xi: FloatArray, x2: FloatArray, y2: FloatArray) -> FloatArray:
        return pair(xi, x2, y2)[1].real

    return d_y1, d_y2



# ---------------------------------------------------------------------------
# Pointwise kernels
# ---------------------------------------------------------------------------


def _canonical_points(x: ArrayLike, y: ArrayLike, t: float) -> tuple[FloatArray, FloatArray, FloatArray, tuple[int, ...]]:
    """Offsets and heights rescaled to ``t = 1``, flattened, plus the broadcast shape."""
    check_time(t)
    x1, x2 = components(x)
    y1, y2 = components(y)
    if np.any(x2 < 0) or np.any(y2 < 0):
        raise InvalidParameterError("Kernel arguments must lie in the closed half plane")
    d1, x2, y2 = np.broadcast_arrays(x1 - y1, x2, y2)
    rt = math.sqrt(t)
    return (d1 / rt).ravel(), (x2 / rt).ravel(), (y2 / rt).ravel(), d1.shape


def _evaluate(
    hat: Callable[[FloatArray, FloatArray, FloatArray], FloatArray],
    x: ArrayLike,
    y: ArrayLike,
    t: float,
    cfg: KernelConfig,
    *,
    odd: bool = False,
    degree: int = 2,
) -> float | FloatArray:
    """Invert an ``x1``-transform given at ``t = 1`` and undo the rescaling.

    For ``odd`` kernels ``hat`` returns the real ``s(xi)`` of a transform
    ``i s(xi)``.
    """
    d1, x2, y2, shape = _canonical_points(x, y, t)
    spectrum = lambda xi: hat(xi, x2, y2)  # noqa: E731
    if odd:
        values = -inverse_sine_transform(spectrum, d1, cfg.tail_extent)
    else:
        values = inverse_cosine_transform(spectrum, d1, cfg.tail_extent)
    return scalar_or_array(values.reshape(shape) / t ** (degree / 2))


def kernel_W_tilde(
    x: ArrayLike,
    y: ArrayLike,
    t: float,
    cfg: KernelConfig = DEFAULT_CONFIG,
    *,
    method: WTildeMethod | None = None,
) -> float | FloatArray:
    """Boundary correction ``W~(x, y, t)``; zero when ``y2 = 0``."""
    tilde = _w_tilde_hat(method or cfg.method, cfg)
    return _evaluate(lambda xi, x2, y2: tilde(xi, x2, y2, 1.0), x, y, t, cfg)


def kernel_W_tr(x: ArrayLike, y: ArrayLike, t: float, cfg: KernelConfig = DEFAULT_CONFIG) -> float | FloatArray:
    """Trace term ``-2 G0(x2, t) (e^{t d11} P_{y2})(x1 - y1)``.

    For ``y2 = 0`` this is ``-2 G0(x2, t) G0(x1 - y1, t)``, which cancels the
    Gaussian pair.
    """
    return _evaluate(lambda xi, x2, y2: w_tr_hat(xi, x2, y2, 1.0), x, y, t, cfg)


def kernel_W_star(
    x: ArrayLike,
    y: ArrayLike,
    t: float,
    cfg: KernelConfig = DEFAULT_CONFIG,
    *,
    method: WTildeMethod | None = None,
) -> float | FloatArray:
    """``W* = Gamma(x - y*, t) + W~(x, y, t)``."""
    x1, x2 = components(x)
    y1, y2 = components(y)
    image = np.asarray(gauss2d(np.stack(np.broadcast_arrays(x1 - y1, x2 + y2), axis=-1), t))
    return scalar_or_array(image + np.asarray(kernel_W_tilde(x, y, t, cfg, method=method)))


def kernel_W_parts(
    x: ArrayLike,
    y: ArrayLike,
    t: float,
    cfg: KernelConfig = DEFAULT_CONFIG,
    *,
    method: WTildeMethod | None = None,
) -> KernelParts:
    """The four components of ``W`` at the same points."""
    x1, x2 = components(x)
    y1, y2 = components(y)
    d1 = x1 - y1
    gamma = gauss2d(np.stack(np.broadcast_arrays(d1, x2 - y2), axis=-1), t)
    gamma_star = gauss2d(np.stack(np.broadcast_arrays(d1, x2 + y2), axis=-1), t)
    return KernelParts(
        gamma=gamma,
        gamma_star=gamma_star,
        w_tilde=kernel_W_tilde(x, y, t, cfg, method=method),
        w_tr=kernel_W_tr(x, y, t, cfg),
    )


def kernel_W(
    x: ArrayLike,
    y: ArrayLike,
    t: float,
    cfg: KernelConfig = DEFAULT_CONFIG,
    *,
    method: WTildeMethod | None = None,
) -> float | FloatArray:
    """Kernel of ``T(t)``: ``Gamma(x - y) + Gamma(x - y*) + W~ + W_tr``."""
    return kernel_W_parts(x, y, t, cfg, method=method).total


def kernel_W0(x: ArrayLike, y: ArrayLike, t: float, cfg: KernelConfig = DEFAULT_CONFIG) -> float | FloatArray:
    """Kernel of the trace-zero semigroup ``T0(t)``.

    Not integrable in ``y`` over the half plane: far from the boundary it
    decays only like ``|x - y*|^-2``.
    """
    x1, x2 = components(x)
    y1, y2 = components(y)
    d1 = x1 - y1
    gamma = np.asarray(gauss2d(np.stack(np.broadcast_arrays(d1, x2 - y2), axis=-1), t))
    gamma_star = np.asarray(gauss2d(np.stack(np.broadcast_arrays(d1, x2 + y2), axis=-1), t))
    correction = np.asarray(_evaluate(lambda xi, a, b: w0_correction_hat(xi, a, b, 1.0), x, y, t, cfg))
    return scalar_or_array(gamma + gamma_star + correction)


def grad_y_kernel_W(
    x: ArrayLike,
    y: ArrayLike,
    t: float,
    cfg: KernelConfig = DEFAULT_CONFIG,
) -> tuple[float | FloatArray, float | FloatArray]:
    """``(d/dy1 W, d/dy2 W)`` at ``(x, y, t)``, the kernel of the Duhamel term."""
    d_y1, d_y2 = grad_y_hats(1.0)
    # d_y1 = i s(xi) with s = -xi W^
    g1 = _evaluate(lambda xi, a, b: (-1j * d_y1(xi, a, b)).real, x, y, t, cfg, odd=True, degree=3)
    g2 = _evaluate(lambda xi, a, b: np.asarray(d_y2(xi, a, b)).real, x, y, t, cfg, degree=3)
    return g1, g2


def green_matrix(
    x: ArrayLike,
    z: ArrayLike,
    t: float,
    cfg: KernelConfig = DEFAULT_CONFIG,
) -> FloatArray:
    """Green matrix ``G(x, z, t)`` of the Stokes semigroup, shape ``(..., 2, 2)``.

    ``G12 = 0`` and ``G22 = Gamma(x - z) - Gamma(x - z*)``. The first column
    carries the correction ``int_0^{x2}`` in its reduced form, with the roles
    of source and target heights exchanged relative to ``W~``.
    """
    x1, x2 = components(x)
    z1, z2 = components(z)
    d1 = x1 - z1
    gamma = np.asarray(gauss2d(np.stack(np.broadcast_arrays(d1, x2 - z2), axis=-1), t))
    gamma_star = np.asarray(gauss2d(np.stack(np.broadcast_arrays(d1, x2 + z2), axis=-1), t))

    # reduced(base=z2, upper=x2): swap roles in the (target, source) signature
    def reduced(xi: FloatArray, a: FloatArray, b: FloatArray) -> FloatArray:
        return reduced_hat(xi, b, a, 1.0, cfg.z2_nodes, cfg.tail_extent)

    red_A = np.asarray(_evaluate(lambda xi, a, b: -xi * reduced(xi, a, b), x, z, t, cfg))
    red_d1 = np.asarray(_evaluate(lambda xi, a, b: xi * reduced(xi, a, b), x, z, t, cfg, odd=True))
    g11 = gamma - gamma_star - 2.0 * red_A
    g21 = 2.0 * red_d1
    g22 = gamma - gamma_star
    out = np.zeros((*g11.shape, 2, 2))
    out[..., 0, 0] = g11
    out[..., 1, 0] = g21
    out[..., 1, 1] = g22
    return out


def green_star_11(x: ArrayLike, z: ArrayLike, t: float, cfg: KernelConfig = DEFAULT_CONFIG) -> float | FloatArray:
    """``G*11 = G11 - Gamma(x - z)``."""
    x1, x2 = components(x)
    z1, z2 = components(z)
    gamma = np.asarray(gauss2d(np.stack(np.broadcast_arrays(x1 - z1, x2 - z2), axis=-1), t))
    return scalar_or_array(green_matrix(x, z, t, cfg)[..., 0, 0] - gamma)


def eta_bound(y2: float) -> float:
    """``int_0^y2 r G0(r, 1) dr + y2 int_y2^inf G0(r, 1) dr``, bounded and increasing."""
    if y2 < 0:
        raise InvalidParameterError(f"eta_bound needs y2 >= 0, got {y2}")
    if y2 == 0:
        return 0.0
    moment, _ = integrate.quad(lambda r: r * float(gauss1d(r, 1.0)), 0.0, y2, epsabs=1e-13, epsrel=1e-12)
    tail, _ = integrate.quad(lambda r: float(gauss1d(r, 1.0)), y2, np.inf, epsabs=1e-13, epsrel=1e-12)
    return float(moment + y2 * tail)


# ---------------------------------------------------------------------------
# Gridded operators
# ---------------------------------------------------------------------------


def periodic_images(offsets: ArrayLike, period: float) -> FloatArray:
    """``sum_{k != 0} (s + k period)^-2``, smooth across ``s = 0``."""
    x = math.pi * np.asarray(offsets, dtype=np.float64) / period
    small = np.abs(x) < 1e-3
    safe = np.where(small, 1.0, x)
    wrapped = 1.0 / np.sin(safe) ** 2 - 1.0 / safe**2
    series = 1.0 / 3.0 + x**2 / 15.0
    return (math.pi / period) ** 2 * np.where(small, series, wrapped)


class RowKernelOperator:
    """Apply ``mu -> int K(x, y) mu(dy)`` on the nodes of a grid.

    ``K`` is known through its transform in ``x1 - y1``; each source height
    contributes a product of spectra per target row, and a single inverse FFT
    per row finishes the job. Boundary layers enter through ``hat`` at
    ``y2 = 0``.

    The padded FFT sums ``K`` over all shifts by the period. Kernels whose
    transform has a ``c1 |xi|`` kink at the origin decay like
    ``-c1 / (pi s^2)``; given ``tail(x2, y2) -> c1`` those periodic images
    are subtracted in closed form. ``hat`` is only evaluated up to ``xi_max``.

    A kernel with several components returns ``(c, n2, n_xi)`` from ``hat``
    (and ``(c, n2)`` from ``tail``) and is applied to a stack of ``c``
    densities, summing the components.
    """

    def __init__(
        self,
        grid: HalfPlaneGrid,
        hat: Hat,
        *,
        pad_factor: int = 4,
        tail: Tail | None = None,
        xi_max: float | None = None,
    ) -> None:
        self.grid = grid
        self.hat = hat
        self.tail = tail
        self.n_pad = pad_factor * grid.n1
        self.period = self.n_pad * grid.h1
        xi = padded_frequencies(self.n_pad, grid.h1)
        self.n_spectrum = xi.size
        if xi_max is not None:
            xi = xi[: max(2, int(np.searchsorted(xi, xi_max, side="right")))]
        self.xi = xi

    def _targets(self) -> FloatArray:
        return self.grid.x2

    def _source_heights(self, y2: float) -> FloatArray:
        return np.full(self.grid.n2, y2)

    def _blank(self) -> ComplexArray:
        return np.zeros((self.grid.n2, self.n_spectrum), dtype=np.complex128)

    def _field_spectrum(self, values: FloatArray) -> ComplexArray:
        return fft.rfft(values, self.n_pad, axis=-1) * self.grid.h1

    def _images(self, sources: FloatArray) -> FloatArray:
        """Periodic image sums from every node ``x1`` to every source abscissa."""
        return periodic_images(self.grid.x1[:, None] - np.asarray(sources)[None, :], self.period)

    def spectrum_density(self, values: FloatArray) -> ComplexArray:
        """Accumulated spectra of a gridded density on this grid.

        ``values`` is ``(n2, n1)``, or ``(c, n2, n1)`` for a ``c``-component kernel.
        """
        grid = self.grid
        n_xi = self.xi.size
        slabs = np.asarray(values, dtype=np.float64).reshape(-1, grid.n2, grid.n1)
        rows = self._field_spectrum(slabs)[..., :n_xi]
        w2 = grid.row_weights
        acc = self._blank()
        coeffs = None if self.tail is None else np.zeros((slabs.shape[0], grid.n2, grid.n2))
        for j, y2 in enumerate(grid.x2):
            if not np.any(slabs[:, j]):
                continue
            heights = self._source_heights(float(y2))
            kernel = np.reshape(self.hat(self.xi, self._targets(), heights), (-1, grid.n2, n_xi))
            acc[:, :n_xi] += w2[j] * np.einsum("cif,cf->if", kernel, rows[:, j])
            if coeffs is not None and self.tail is not None:
                coeffs[:, :, j] = w2[j] * np.reshape(self.tail(self._targets(), heights), (-1, grid.n2))
        if coeffs is not None and np.any(coeffs):
            images = grid.h1 * (slabs @ self._images(grid.x1).T)
            acc += self._field_spectrum(np.einsum("cij,cjk->ik", coeffs, images) / math.pi)
        return acc

    def spectrum_points(self, points: FloatArray, weights: FloatArray) -> ComplexArray:
        n_xi = self.xi.size
        acc = self._blank()
        correction = np.zeros(self.grid.shape)
        for (y1, y2), w in zip(points, weights, strict=True):
            heights = self._source_heights(float(y2))
            shift = np.exp(-1j * self.xi * (y1 - self.grid.x1_min))
            acc[:, :n_xi] += w * self.hat(self.xi, self._targets(), heights) * shift
            if self.tail is not None:
                c1 = np.asarray(self.tail(self._targets(), heights))
                correction += (w / math.pi) * c1[:, None] * self._images(np.array([y1]))[:, 0][None, :]
        if np.any(correction):
            acc += self._field_spectrum(correction)
        return acc

    def spectrum_layer(self, layer: LineSamples) -> ComplexArray:
        n_xi = self.xi.size
        row = layer.interpolate(self.grid.x1)
        spectrum = self._field_spectrum(row)
        heights = self._source_heights(0.0)
        acc = self._blank()
        acc[:, :n_xi] = self.hat(self.xi, self._targets(), heights) * spectrum[:n_xi]
        if self.tail is not None:
            c1 = np.asarray(self.tail(self._targets(), heights))
            if np.any(c1):
                images = self.grid.h1 * (self._images(self.grid.x1) @ row)
                acc += self._field_spectrum(c1[:, None] * images[None, :] / math.pi)
        return acc

    def finish(self, spectrum: ComplexArray) -> FloatArray:
        return fft.irfft(spectrum / self.grid.h1, self.n_pad, axis=1)[:, : self.grid.n1]

    def apply_density(self, values: FloatArray) -> FloatArray:
        return self.finish(self.spectrum_density(values))

    def apply(self, mu: VorticityMeasure) -> ScalarField:
        acc = self._blank()
        points, weights = mu.point_sources()
        if weights.size:
            acc += self.spectrum_points(points, weights)
        if mu.density is not None:
            acc += self.spectrum_density(resample(mu.density, self.grid))
        if mu.boundary_sheet is not None:
            acc += self.spectrum_layer(mu.boundary_sheet)
        return ScalarField(self.grid, self.finish(acc))


def _xi_max(t: float, cfg: KernelConfig) -> float:
    return cfg.tail_extent / math.sqrt(t)


def apply_T_kernel(
    mu: VorticityMeasure,
    t: float,
    grid: HalfPlaneGrid,
    cfg: KernelConfig = DEFAULT_CONFIG,
) -> ScalarField:
    """``T(t) mu = int W(x, y, t) mu(dy)`` by direct summation against ``W``.

    Sources on the boundary drop out up to rounding: there ``W~`` vanishes
    and the trace term cancels the Gaussian pair.
    """
    check_time(t)
    op = RowKernelOperator(
        grid, w_hat(t, cfg), pad_factor=cfg.pad_factor, tail=w_tail(t), xi_max=_xi_max(t, cfg)
    )
    return op.apply(mu)


def apply_T_composite(
    mu: VorticityMeasure,
    t: float,
    grid: HalfPlaneGrid,
    cfg: KernelConfig = DEFAULT_CONFIG,
) -> ScalarField:
    """``T(t) mu`` assembled from its three operator terms.

    ``e^{t Delta_N} mu``, plus the boundary correction integrated against the
    closed-form ``W~``, minus ``2 G0(x2, t) e^{t d11} u1(., 0)``.
    """
    check_time(t)
    neumann = heat_neumann(mu, t, grid)
    correction = RowKernelOperator(
        grid,
        lambda xi, x2, y2: w_tilde_hat_spectral(xi, x2, y2, t),
        pad_factor=cfg.pad_factor,
        tail=lambda x2, y2: w_tilde_tail(x2, y2, t),
        xi_max=_xi_max(t, cfg),
    ).apply(mu)
    # the heat kernel reaches tail_extent * sqrt(t) past the window
    reach = math.ceil(cfg.tail_extent * math.sqrt(t) / grid.h1)
    trace = boundary_trace(mu, grid.widened(reach))
    transported = line_heat(trace, t, pad_factor=cfg.pad_factor).values[reach : reach + grid.n1]
    trace_term = -2.0 * np.asarray(gauss1d(grid.x2, t))[:, None] * transported[None, :]
    logger.debug("T(%g) composite: boundary trace max %.3e", t, trace.max_abs())
    return neumann + correction + ScalarField(grid, trace_term)


def apply_T0(
    mu: VorticityMeasure,
    t: float,
    grid: HalfPlaneGrid,
    cfg: KernelConfig = DEFAULT_CONFIG,
) -> ScalarField:
    """Trace-zero semigroup ``T0(t) mu`` through its explicit kernel.

    Agrees with ``T(t)`` whenever ``u1(., 0) = 0`` and ``mu`` has no boundary
    layer.
    """
    check_time(t)
    op = RowKernelOperator(
        grid,
        lambda xi, x2, y2: gamma_pair_hat(xi, x2, y2, t) + w0_correction_hat(xi, x2, y2, t),
        pad_factor=cfg.pad_factor,
        tail=lambda x2, y2: w0_correction_tail(x2, y2, t),
        xi_max=_xi_max(t, cfg),
    )
    return op.apply(mu)
