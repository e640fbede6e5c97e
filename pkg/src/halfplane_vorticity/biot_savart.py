"""Velocity from vorticity, the boundary trace of the velocity, and normalization.

Point sources (atoms and sheet samples) go through the closed-form kernel
``grad_x^perp D``. Gridded densities go through the stream function: the
Dirichlet inverse Laplacian followed by a centered-difference curl, which
keeps the discrete divergence of the density part at rounding level.
"""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

import numpy as np

from halfplane_vorticity.exceptions import InvalidParameterError
from halfplane_vorticity.grid_core import HalfPlaneGrid, LineSamples, ScalarField, VectorField, VorticityMeasure
from halfplane_vorticity.kernels import EPS_SINGULAR
from halfplane_vorticity.semigroups import inv_laplace_dirichlet

if TYPE_CHECKING:
    from numpy.typing import NDArray

    FloatArray = NDArray[np.float64]

logger = logging.getLogger(__name__)


def _point_velocity(
    points: FloatArray, weights: FloatArray, grid: HalfPlaneGrid
) -> tuple[FloatArray, FloatArray, list[tuple[int, int]]]:
    X1, X2 = grid.mesh()
    u1 = np.zeros(grid.shape)
    u2 = np.zeros(grid.shape)
    flagged: list[tuple[int, int]] = []
    for (y1, y2), w in zip(points, weights, strict=True):
        if y2 == 0.0:
            continue
        d1 = X1 - y1
        dm = X2 - y2
        dp = X2 + y2
        r2 = d1**2 + dm**2
        hosted = r2 < EPS_SINGULAR**2
        safe_r2 = np.where(hosted, 1.0, r2)
        rs2 = d1**2 + dp**2
        direct1 = np.where(hosted, 0.0, -dm / safe_r2)
        direct2 = np.where(hosted, 0.0, d1 / safe_r2)
        u1 += w * (direct1 + dp / rs2) / (2 * math.pi)
        u2 += w * (direct2 - d1 / rs2) / (2 * math.pi)
        if np.any(hosted):
            i2, i1 = np.argwhere(hosted)[0]
            flagged.append((int(i2), int(i1)))
            logger.warning(
                "Source at (%g, %g) coincides with node (%d, %d); its self-contribution is excluded there",
                y1,
                y2,
                i2,
                i1,
            )
    return u1, u2, flagged


def stream_curl(psi: ScalarField) -> VectorField:
    """``(d2 psi, -d1 psi)`` by centered differences.

    The boundary row uses the odd reflection of a Dirichlet stream function,
    so ``u1 = psi[1] / h2`` and ``u2 = 0`` there.
    """
    grid = psi.grid
    d2, d1 = np.gradient(psi.values, grid.h2, grid.h1)
    d2[0] = psi.values[1] / grid.h2
    u2 = -d1
    u2[0] = 0.0
    return VectorField(grid, d2, u2)


def velocity_from_measure(mu: VorticityMeasure, grid: HalfPlaneGrid | None = None) -> VectorField:
    """Biot-Savart velocity ``K mu`` on the nodes of ``grid``.

    Boundary layers contribute nothing since the kernel vanishes at ``y2 = 0``.
    Nodes that coincide with a point source keep only the image part of that
    source and are listed in ``singular_nodes``.
    """
    if grid is None:
        if mu.density is None:
            raise InvalidParameterError("A target grid is required for measures without a density")
        grid = mu.density.grid
    points, weights = mu.point_sources()
    u1, u2, flagged = _point_velocity(points, weights, grid)
    velocity = VectorField(grid, u1, u2, tuple(flagged))
    if mu.density is not None:
        psi = inv_laplace_dirichlet(VorticityMeasure.from_density(mu.density), grid)
        velocity = velocity + stream_curl(psi)
    return velocity


def _density_trace(density: ScalarField, x1: FloatArray) -> FloatArray:
    """Poisson average of a gridded density at the boundary points ``x1``.

    Rows within three cells of the boundary are summed against the cell
    average of ``P_{y2}``, higher rows against its nodal values; targets may
    lie outside the density's window. The boundary row passes through and the
    rows are combined with the end-corrected weights in ``y2``.
    """
    g = density.grid
    w1 = g.column_weights
    w2 = g.row_weights
    offsets = x1[:, None] - g.x1[None, :]
    out = w2[0] * np.interp(x1, g.x1, density.values[0], left=0.0, right=0.0)
    for i2 in range(1, g.n2):
        row = density.values[i2]
        if not np.any(row):
            continue
        s = float(g.x2[i2])
        if s < 3.0 * g.h1:
            kern = (np.arctan((offsets + 0.5 * g.h1) / s) - np.arctan((offsets - 0.5 * g.h1) / s)) / (math.pi * g.h1)
        else:
            kern = s / (math.pi * (offsets**2 + s**2))
        out += w2[i2] * (kern @ (row * w1))
    return out


def boundary_trace(
    mu: VorticityMeasure,
    grid: HalfPlaneGrid | None = None,
) -> LineSamples:
    """``T1 mu = int P_{y2}(x1 - y1) mu(dy)`` with ``P_0`` the Dirac mass, so boundary layers pass through.

    Off the boundary this is the tangential boundary velocity ``u1(., 0)``.
    A point source on ``y2 = 0`` is deposited on its two neighbouring nodes.
    Densities go through :func:`_density_trace`.
    """
    if grid is None:
        if mu.density is None:
            raise InvalidParameterError("A target grid is required for measures without a density")
        grid = mu.density.grid
    x1 = grid.x1
    out = np.zeros(grid.n1)
    points, weights = mu.point_sources()
    for (y1, y2), w in zip(points, weights, strict=True):
        if y2 > 0:
            out += w * y2 / (math.pi * ((x1 - y1) ** 2 + y2**2))
        elif grid.x1_min <= y1 <= grid.x1_max:
            out += w * np.interp(x1, [y1 - grid.h1, y1, y1 + grid.h1], [0.0, 1.0, 0.0]) / grid.h1
    if mu.boundary_sheet is not None:
        out += mu.boundary_sheet.interpolate(x1)
    if mu.density is not None:
        out += _density_trace(mu.density, x1)
    return LineSamples(grid.x1_min, grid.x1_max, out)


def trace_tail_mass(mu: VorticityMeasure, x1_min: float, x1_max: float) -> float:
    """Part of ``int T1 mu dx1`` falling outside ``[x1_min, x1_max]``.

    Exact for point sources; densities are summed node by node with the
    closed-form window integral of the Poisson kernel. Mass on the boundary
    counts where it sits.
    """

    def outside(y1: FloatArray, y2: FloatArray) -> FloatArray:
        inside_line = ((y1 >= x1_min) & (y1 <= x1_max)).astype(np.float64)
        safe = np.where(y2 > 0, y2, 1.0)
        window = (np.arctan((x1_max - y1) / safe) - np.arctan((x1_min - y1) / safe)) / math.pi
        return 1.0 - np.where(y2 > 0, window, inside_line)

    points, weights = mu.point_sources()
    tail = float(np.sum(weights * outside(points[:, 0], points[:, 1])))
    if mu.density is not None:
        X1, X2 = mu.density.grid.mesh()
        tail += float(np.sum(mu.density.grid.weights * mu.density.values * outside(X1, X2)))
    if mu.boundary_sheet is not None:
        sheet = mu.boundary_sheet
        w = np.full(sheet.n, sheet.h)
        w[[0, -1]] *= 0.5
        tail += float(np.sum(w * sheet.values * outside(sheet.x, np.zeros(sheet.n))))
    return tail


def normalize_measure(mu: VorticityMeasure, grid: HalfPlaneGrid | None = None) -> VorticityMeasure:
    """Subtract the boundary layer ``delta_{x2=0} T1 mu`` from ``mu``.

    The result has the same velocity as ``mu`` and a vanishing ``T1``, so
    normalizing twice changes nothing.
    """
    trace = boundary_trace(mu, grid)
    layer = VorticityMeasure(boundary_sheet=-trace)
    logger.debug("Normalizing measure: boundary layer mass %.6g", -trace.integral())
    return mu + layer
