"""Registry of built-in initial vorticities."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np

from halfplane_vorticity.exceptions import InvalidParameterError, UnknownScenarioError
from halfplane_vorticity.grid_core import HalfPlaneGrid, ScalarField, VorticityMeasure

if TYPE_CHECKING:
    from numpy.typing import NDArray

    FloatArray = NDArray[np.float64]

Params = dict[str, Any]
Builder = Callable[[Params, HalfPlaneGrid], VorticityMeasure]

DEFAULT_KAPPA = 0.05
DEFAULT_SHEET = {"x1_min": -1.0, "x1_max": 1.0, "x2": 1.0, "density": 1.0, "samples": 200}
DEFAULT_BLOB = {"x1": 0.0, "x2": 2.0, "width": 0.5, "amplitude": 1.0}

# Two Gaussian stream-function bumps of opposite sign, negligible beyond CUT widths.
DIPOLE_CENTERS = ((-1.2, 3.6), (1.2, 3.6))
DIPOLE_WIDTH = 0.4
DIPOLE_CUT = 9.0


def sheet_from_curve(
    curve: Callable[[FloatArray], tuple[FloatArray, FloatArray]],
    s_min: float,
    s_max: float,
    density: Callable[[FloatArray], FloatArray] | float,
    samples: int,
) -> VorticityMeasure:
    """Discretize ``density ds`` along a parametric curve.

    The parameter interval is cut into ``samples`` cells. Each cell gives one
    sample at its parameter midpoint, weighted by the density there times the
    length of the chord across the cell.
    """
    if samples < 1:
        raise InvalidParameterError(f"A vortex sheet needs at least one sample, got {samples}")
    if not s_max > s_min:
        raise InvalidParameterError(f"Empty parameter range [{s_min}, {s_max}]")
    edges = np.linspace(s_min, s_max, samples + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    e1, e2 = curve(edges)
    m1, m2 = curve(mids)
    ds = np.hypot(np.diff(e1), np.diff(e2))
    rho = np.broadcast_to(density(mids) if callable(density) else float(density), mids.shape)
    points = np.column_stack([m1, m2])
    if np.any(points[:, 1] < 0):
        raise InvalidParameterError("A vortex sheet must lie in the closed upper half plane")
    return VorticityMeasure(sheet_points=points, sheet_weights=rho * ds)


def gaussian_bump(r: FloatArray, width: float) -> FloatArray:
    """``exp(-r^2 / (2 width^2))``."""
    return np.exp(-(r**2) / (2 * width**2))


def gaussian_bump_laplacian(r: FloatArray, width: float) -> FloatArray:
    """Closed-form Laplacian of :func:`gaussian_bump` in the plane."""
    return (r**2 / width**4 - 2 / width**2) * gaussian_bump(r, width)


def _dipole_sum(bump: Callable[[FloatArray, float], FloatArray], X1: FloatArray, X2: FloatArray) -> FloatArray:
    (a1, a2), (b1, b2) = DIPOLE_CENTERS
    return bump(np.hypot(X1 - a1, X2 - a2), DIPOLE_WIDTH) - bump(np.hypot(X1 - b1, X2 - b2), DIPOLE_WIDTH)


def _atoms(params: Params, default: list[list[float]]) -> VorticityMeasure:
    atoms = params.get("atoms") or default
    points = [(a[0], a[1]) for a in atoms]
    weights = [a[2] for a in atoms]
    return VorticityMeasure.atoms(points, weights)


def _point_vortex(params: Params, grid: HalfPlaneGrid) -> VorticityMeasure:
    mu = _atoms(params, [[0.0, 1.0, params.get("amplitude", DEFAULT_KAPPA)]])
    if mu.atom_weights.size != 1:
        raise InvalidParameterError(f"point_vortex takes exactly one atom, got {mu.atom_weights.size}")
    return mu


def _vortex_pair(params: Params, grid: HalfPlaneGrid) -> VorticityMeasure:
    kappa = params.get("amplitude", DEFAULT_KAPPA)
    mu = _atoms(params, [[-0.5, 1.0, kappa], [0.5, 1.0, -kappa]])
    if mu.atom_weights.size != 2:
        raise InvalidParameterError(f"vortex_pair takes exactly two atoms, got {mu.atom_weights.size}")
    return mu


def _vortex_sheet(params: Params, grid: HalfPlaneGrid) -> VorticityMeasure:
    spec = {**DEFAULT_SHEET, **params.get("sheet", {})}
    x2 = float(spec["x2"])
    return sheet_from_curve(
        lambda s: (s, np.full_like(s, x2)),
        float(spec["x1_min"]),
        float(spec["x1_max"]),
        float(spec["density"]),
        int(spec["samples"]),
    )


def _smooth_blob(params: Params, grid: HalfPlaneGrid) -> VorticityMeasure:
    spec = {**DEFAULT_BLOB, **params.get("density", {})}
    if not spec["width"] > 0:
        raise InvalidParameterError(f"Blob width must be positive, got {spec['width']}")
    width = float(spec["width"])
    amplitude = float(params.get("amplitude", spec["amplitude"]))

    def blob(X1: FloatArray, X2: FloatArray) -> FloatArray:
        r2 = (X1 - spec["x1"]) ** 2 + (X2 - spec["x2"]) ** 2
        return amplitude * np.exp(-r2 / (2 * width**2)) / (2 * np.pi * width**2)

    return VorticityMeasure.from_density(ScalarField.from_function(grid, blob))


def dipole_stream_function(grid: HalfPlaneGrid, amplitude: float = 1.0) -> ScalarField:
    """Stream function ``psi`` of the trace-zero dipole ``omega = -Delta psi``.

    Both ``psi`` and ``d2 psi`` are below ``exp(-CUT^2 / 2)`` on ``x2 = 0``, so
    the Dirichlet stream function of the dipole is ``psi`` itself and its
    boundary velocity vanishes.
    """
    return ScalarField.from_function(grid, lambda X1, X2: amplitude * _dipole_sum(gaussian_bump, X1, X2))


def _trace_zero_dipole(params: Params, grid: HalfPlaneGrid) -> VorticityMeasure:
    amplitude = float(params.get("amplitude", 1.0))
    cut = DIPOLE_CUT * DIPOLE_WIDTH
    top = max(c[1] for c in DIPOLE_CENTERS) + cut
    reach = max(abs(c[0]) for c in DIPOLE_CENTERS) + cut
    if grid.x2_max < top or grid.x1_max < reach or grid.x1_min > -reach:
        raise InvalidParameterError("The grid does not cover the support of the trace-zero dipole")
    density = ScalarField.from_function(grid, lambda X1, X2: -amplitude * _dipole_sum(gaussian_bump_laplacian, X1, X2))
    return VorticityMeasure.from_density(density)


def _stokes_only(params: Params, grid: HalfPlaneGrid) -> VorticityMeasure:
    mu = VorticityMeasure()
    if params.get("atoms") or not (params.get("sheet") or params.get("density")):
        mu = mu + _atoms(params, [[0.0, 1.0, params.get("amplitude", 1.0)]])
    if params.get("sheet"):
        mu = mu + _vortex_sheet(params, grid)
    if params.get("density"):
        mu = mu + _smooth_blob(params, grid)
    return mu


@dataclass(frozen=True)
class ScenarioInfo:
    """Information about a scenario."""

    name: str
    description: str
    builder: Builder
    solver: str = "picard"


SCENARIOS: dict[str, ScenarioInfo] = {
    "point_vortex": ScenarioInfo(
        name="point_vortex",
        description="Single atom kappa*delta_x0",
        builder=_point_vortex,
    ),
    "vortex_pair": ScenarioInfo(
        name="vortex_pair",
        description="Two atoms of opposite circulation",
        builder=_vortex_pair,
    ),
    "vortex_sheet": ScenarioInfo(
        name="vortex_sheet",
        description="Uniform sheet on a horizontal segment",
        builder=_vortex_sheet,
    ),
    "smooth_blob": ScenarioInfo(
        name="smooth_blob",
        description="Gaussian vorticity density",
        builder=_smooth_blob,
    ),
    "trace_zero_dipole": ScenarioInfo(
        name="trace_zero_dipole",
        description="Curl of an odd Gaussian stream function: zero mass, zero boundary velocity",
        builder=_trace_zero_dipole,
    ),
    "stokes_only": ScenarioInfo(
        name="stokes_only",
        description="Linear Stokes evolution T(t)mu0, no Picard iteration",
        builder=_stokes_only,
        solver="stokes",
    ),
}


class ScenarioRegistry:
    """Registry for looking up and building initial data."""

    def list_scenarios(self) -> list[str]:
        """List all registered scenario names."""
        return list(SCENARIOS.keys())

    def get_info(self, name: str) -> ScenarioInfo:
        """Get information about a scenario.

        Raises:
            UnknownScenarioError: If the scenario is not registered.
        """
        info = SCENARIOS.get(name)
        if info is None:
            raise UnknownScenarioError(name, self.list_scenarios())
        return info

    def build(self, name: str, params: Params | None = None, grid: HalfPlaneGrid | None = None) -> VorticityMeasure:
        """Build the initial measure of scenario ``name``.

        Density scenarios are sampled on ``grid`` (the default grid if omitted).
        """
        info = self.get_info(name)
        return info.builder(dict(params or {}), grid or HalfPlaneGrid.default())


registry = ScenarioRegistry()


def builtin_initial(name: str, params: Params | None = None, grid: HalfPlaneGrid | None = None) -> VorticityMeasure:
    """Initial vorticity of a built-in scenario."""
    return registry.build(name, params, grid)
