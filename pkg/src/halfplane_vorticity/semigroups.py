"""Neumann and Dirichlet heat semigroups and inverse Laplacians on the half plane.

Gridded densities are reflected evenly (Neumann) or oddly (Dirichlet) across
``x2 = 0`` and handled on the full plane: heat evolution through the Gaussian
Fourier multiplier, inverse Laplacians through FFT convolution with the sampled
logarithmic potential. Heat evolution weights the rows with the end-corrected
rule of :attr:`HalfPlaneGrid.row_weights`. Atoms and sheet samples are summed
exactly against the image kernels.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from typing import TYPE_CHECKING

import numpy as np
from scipy import fft, signal

from halfplane_vorticity.exceptions import InvalidParameterError
from halfplane_vorticity.grid_core import HalfPlaneGrid, LineSamples, ScalarField, VorticityMeasure
from halfplane_vorticity.kernels import (
    EPS_SINGULAR,
    check_time,
    gauss1d,
    log_cell_average,
)
from halfplane_vorticity.line_ops import line_heat

if TYPE_CHECKING:
    from numpy.typing import NDArray

    FloatArray = NDArray[np.float64]

logger = logging.getLogger(__name__)

NEUMANN = 1.0
DIRICHLET = -1.0


def reflect(values: FloatArray, parity: float) -> FloatArray:
    """Extend ``(n2, n1)`` samples to ``(2 n2 - 1, n1)`` across ``x2 = 0``.

    Row ``n2 - 1`` of the result is the boundary row. Odd reflection zeroes it.
    """
    lower = parity * values[:0:-1]
    boundary = values[:1] if parity > 0 else np.zeros_like(values[:1])
    return np.vstack([lower, boundary, values[1:]])


def _source_weights(grid: HalfPlaneGrid) -> FloatArray:
    """Quadrature weights on the reflected grid (full weight on the boundary row)."""
    w1 = np.full(grid.n1, grid.h1)
    w1[[0, -1]] *= 0.5
    w2 = np.full(2 * grid.n2 - 1, grid.h2)
    w2[[0, -1]] *= 0.5
    return np.outer(w2, w1)


def whole_plane_heat(values: FloatArray, h1: float, h2: float, t: float, *, d2: bool = False) -> FloatArray:
    """Gaussian multiplier ``exp(-t |xi|^2)`` on zero-padded full-plane samples.

    With ``d2`` the multiplier also carries ``i xi2``, which differentiates the
    Gaussian rather than the samples.
    """
    n2, n1 = values.shape
    pad2 = fft.next_fast_len(2 * n2)
    pad1 = fft.next_fast_len(2 * n1)
    xi2 = 2 * math.pi * fft.fftfreq(pad2, d=h2)
    xi1 = 2 * math.pi * fft.rfftfreq(pad1, d=h1)
    spectrum = fft.rfft2(values, s=(pad2, pad1))
    spectrum *= np.exp(-t * xi2[:, None] ** 2) * np.exp(-t * xi1[None, :] ** 2)
    if d2:
        slope = 1j * xi2
        if pad2 % 2 == 0:
            slope[pad2 // 2] = 0.0
        spectrum *= slope[:, None]
    return fft.irfft2(spectrum, s=(pad2, pad1))[:n2, :n1]


def _reflected_row_factors(grid: HalfPlaneGrid) -> FloatArray:
    """Row multipliers that turn the plain reflected lattice sum into the end-corrected rule."""
    g = grid.row_weights / grid.h2
    return np.concatenate([g[:0:-1], [2.0 * g[0]], g[1:]])


def _image_heat_field(f: ScalarField, t: float, parity: float, *, d2: bool = False) -> ScalarField:
    grid = f.grid
    ext = reflect(f.values, parity) * _reflected_row_factors(grid)[:, None]
    evolved = whole_plane_heat(ext, grid.h1, grid.h2, t, d2=d2)
    return ScalarField(grid, evolved[grid.n2 - 1 :])


def point_image_sum(
    points: FloatArray,
    weights: FloatArray,
    grid: HalfPlaneGrid,
    kernel: Callable[[FloatArray, FloatArray, FloatArray], FloatArray],
) -> FloatArray:
    """Sum ``w * kernel(x1 - y1, x2, y2)`` over point sources on every node."""
    X1, X2 = grid.mesh()
    out = np.zeros(grid.shape)
    for (y1, y2), w in zip(points, weights, strict=True):
        out += w * kernel(X1 - y1, X2, np.full_like(X2, y2))
    return out


def _heat_image_kernel(t: float, parity: float) -> Callable[[FloatArray, FloatArray, FloatArray], FloatArray]:
    def kernel(d1: FloatArray, x2: FloatArray, y2: FloatArray) -> FloatArray:
        g1 = np.asarray(gauss1d(d1, t))
        return g1 * (np.asarray(gauss1d(x2 - y2, t)) + parity * np.asarray(gauss1d(x2 + y2, t)))

    return kernel


def _boundary_layer_heat(b: LineSamples, grid: HalfPlaneGrid, t: float) -> FloatArray:
    """Neumann heat of ``b(x1) delta_{x2=0}``: ``2 gauss1d(x2, t) (e^{t d11} b)(x1)``."""
    evolved = line_heat(b, t)
    row = evolved.interpolate(grid.x1)
    return 2.0 * np.asarray(gauss1d(grid.x2, t))[:, None] * row[None, :]


def _apply_heat(f: ScalarField | VorticityMeasure, t: float, grid: HalfPlaneGrid | None, parity: float) -> ScalarField:
    check_time(t)
    if isinstance(f, ScalarField):
        return _image_heat_field(f, t, parity)
    if grid is None:
        if f.density is None:
            raise InvalidParameterError("A target grid is required for measures without a density")
        grid = f.density.grid
    out = np.zeros(grid.shape)
    points, weights = f.point_sources()
    if weights.size:
        out += point_image_sum(points, weights, grid, _heat_image_kernel(t, parity))
    if f.density is not None:
        out += resample(_image_heat_field(f.density, t, parity), grid)
    if f.boundary_sheet is not None and parity > 0:
        out += _boundary_layer_heat(f.boundary_sheet, grid, t)
    return ScalarField(grid, out)


def resample(field: ScalarField, grid: HalfPlaneGrid) -> FloatArray:
    """Values of ``field`` on the nodes of ``grid`` (zero outside its window)."""
    if field.grid == grid:
        return field.values
    X1, X2 = grid.mesh()
    pts = np.column_stack([X1.ravel(), X2.ravel()])
    return field.interpolate(pts, strict=False).reshape(grid.shape)


def heat_neumann(
    f: ScalarField | VorticityMeasure, t: float, grid: HalfPlaneGrid | None = None
) -> ScalarField:
    """Neumann heat semigroup, kernel ``Gamma(x - y, t) + Gamma(x - y*, t)``.

    Args:
        f: Gridded field, or a measure evaluated on ``grid``.
        t: Time, must be positive.
        grid: Target grid for measures (defaults to the density's grid).
    """
    return _apply_heat(f, t, grid, NEUMANN)


def heat_dirichlet(
    f: ScalarField | VorticityMeasure, t: float, grid: HalfPlaneGrid | None = None
) -> ScalarField:
    """Dirichlet heat semigroup, kernel ``Gamma(x - y, t) - Gamma(x - y*, t)``.

    Boundary layers are annihilated by the odd image.
    """
    return _apply_heat(f, t, grid, DIRICHLET)


def d2_heat_neumann(f: ScalarField, t: float) -> ScalarField:
    """``d/dx2 e^{t Delta_N} f`` with the derivative taken on the image kernel."""
    check_time(t)
    return _image_heat_field(f, t, NEUMANN, d2=True)


def d2_heat_dirichlet(f: ScalarField, t: float) -> ScalarField:
    """``d/dx2 e^{t Delta_D} f`` with the derivative taken on the image kernel."""
    check_time(t)
    return _image_heat_field(f, t, DIRICHLET, d2=True)



# ---------------------------------------------------------------------------
# Inverse Laplacians
# ---------------------------------------------------------------------------


def _log_kernel_samples(grid: HalfPlaneGrid) -> FloatArray:
    """``E`` on the offset lattice covering every reflected source/target pair."""
    k2 = np.arange(-2 * (grid.n2 - 1), 2 * (grid.n2 - 1) + 1) * grid.h2
    k1 = np.arange(-(grid.n1 - 1), grid.n1) * grid.h1
    D1, D2 = np.meshgrid(k1, k2, indexing="xy")
    r2 = D1**2 + D2**2
    r2[2 * (grid.n2 - 1), grid.n1 - 1] = 1.0
    E = -np.log(r2) / (4 * math.pi)
    E[2 * (grid.n2 - 1), grid.n1 - 1] = log_cell_average(grid.h1, grid.h2)
    return E


def convolve_reflected(values: FloatArray, grid: HalfPlaneGrid, parity: float, kernel: FloatArray) -> FloatArray:
    """Convolve reflected density samples with a kernel on the offset lattice."""
    source = reflect(values, parity) * _source_weights(grid)
    full = signal.fftconvolve(source, kernel, mode="full")
    row0 = (grid.n2 - 1) + 2 * (grid.n2 - 1)
    col0 = grid.n1 - 1
    return full[row0 : row0 + grid.n2, col0 : col0 + grid.n1]


def _log_point_sum(mu: VorticityMeasure, grid: HalfPlaneGrid, parity: float) -> FloatArray:
    points, weights = mu.point_sources()
    X1, X2 = grid.mesh()
    out = np.zeros(grid.shape)
    self_value = log_cell_average(grid.h1, grid.h2)
    for (y1, y2), w in zip(points, weights, strict=True):
        r2 = (X1 - y1) ** 2 + (X2 - y2) ** 2
        hosted = r2 < EPS_SINGULAR**2
        direct = np.where(hosted, self_value, -np.log(np.where(hosted, 1.0, r2)) / (4 * math.pi))
        rs2 = (X1 - y1) ** 2 + (X2 + y2) ** 2
        rs_hosted = rs2 < EPS_SINGULAR**2
        image = np.where(rs_hosted, self_value, -np.log(np.where(rs_hosted, 1.0, rs2)) / (4 * math.pi))
        if np.any(hosted):
            logger.debug("Atom at (%g, %g) sits on a node; using the cell-averaged potential", y1, y2)
        out += w * (direct + parity * image)
    return out


def _boundary_layer_log(b: LineSamples, grid: HalfPlaneGrid) -> FloatArray:
    """``int 2 E(x - (y1, 0)) b(y1) dy1`` with the self segment averaged."""
    row = b.interpolate(grid.x1)
    w = np.full(grid.n1, grid.h1)
    w[[0, -1]] *= 0.5
    offsets = np.arange(-(grid.n1 - 1), grid.n1) * grid.h1
    out = np.empty(grid.shape)
    segment_mean = -(math.log(0.5 * grid.h1) - 1.0) / (2 * math.pi)
    for i2, x2 in enumerate(grid.x2):
        r2 = offsets**2 + x2**2
        if x2 == 0.0:
            r2[grid.n1 - 1] = 1.0
            kern = -np.log(r2) / (4 * math.pi)
            kern[grid.n1 - 1] = segment_mean
        else:
            kern = -np.log(r2) / (4 * math.pi)
        out[i2] = 2.0 * np.convolve(row * w, kern, mode="full")[grid.n1 - 1 : 2 * grid.n1 - 1]
    return out


def _inverse_laplace(mu: VorticityMeasure, grid: HalfPlaneGrid | None, parity: float) -> ScalarField:
    if grid is None:
        if mu.density is None:
            raise InvalidParameterError("A target grid is required for measures without a density")
        grid = mu.density.grid
    out = np.zeros(grid.shape)
    if mu.atom_weights.size or mu.sheet_weights.size:
        out += _log_point_sum(mu, grid, parity)
    if mu.density is not None:
        dens = mu.density
        potential = convolve_reflected(dens.values, dens.grid, parity, _log_kernel_samples(dens.grid))
        out += resample(ScalarField(dens.grid, potential), grid)
    if mu.boundary_sheet is not None and parity > 0:
        out += _boundary_layer_log(mu.boundary_sheet, grid)
    if parity < 0:
        out[0] = 0.0
    return ScalarField(grid, out)


def inv_laplace_dirichlet(mu: VorticityMeasure, grid: HalfPlaneGrid | None = None) -> ScalarField:
    """Stream function ``psi = (-Delta_D)^-1 mu = int D(x, y) mu(dy)``.

    Nodes hosting an atom take the cell average of the logarithmic
    singularity; ``psi`` vanishes on the boundary row.
    """
    return _inverse_laplace(mu, grid, DIRICHLET)


def inv_laplace_neumann(mu: VorticityMeasure, grid: HalfPlaneGrid | None = None) -> ScalarField:
    """``(-Delta_N)^-1 mu = int (E(x - y) + E(x - y*)) mu(dy)``."""
    return _inverse_laplace(mu, grid, NEUMANN)


def five_point_laplacian(f: ScalarField) -> FloatArray:
    """Interior 5-point Laplacian, shape ``(n2 - 2, n1 - 2)``."""
    v, h1, h2 = f.values, f.grid.h1, f.grid.h2
    return (v[1:-1, 2:] - 2 * v[1:-1, 1:-1] + v[1:-1, :-2]) / h1**2 + (
        v[2:, 1:-1] - 2 * v[1:-1, 1:-1] + v[:-2, 1:-1]
    ) / h2**2
