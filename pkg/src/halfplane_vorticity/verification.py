"""Numerical property checks, grouped into named suites.

Every check measures one quantity and compares it with a tolerance. Checks
named ``... decreasing`` report the largest ratio of consecutive values and
pass when it stays below one.
"""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy import integrate

from halfplane_vorticity.biot_savart import boundary_trace, normalize_measure, trace_tail_mass, velocity_from_measure
from halfplane_vorticity.exceptions import InvalidParameterError, UnknownSuiteError
from halfplane_vorticity.grid_core import (
    HalfPlaneGrid,
    LineSamples,
    ScalarField,
    TimeMesh,
    VectorField,
    VorticityMeasure,
    integrate_field,
    lq_norm,
    measure_pairing,
)
from halfplane_vorticity.kernels import (
    biot_savart_kernel,
    conj_poisson_Q,
    dirichlet_green,
    gauss1d,
    gauss2d,
    grad_E,
    poisson_P,
)
from halfplane_vorticity.line_ops import DEFAULT_PAD, apply_A, derivative, hilbert, line_heat, poisson_semigroup
from halfplane_vorticity.navier_stokes import (
    VorticityPath,
    duhamel_term,
    fd_oracle_linear,
    flux_term,
    mild_residual,
    picard_solve,
)
from halfplane_vorticity.scenarios import DEFAULT_BLOB, builtin_initial
from halfplane_vorticity.semigroups import (
    d2_heat_dirichlet,
    d2_heat_neumann,
    five_point_laplacian,
    heat_dirichlet,
    heat_neumann,
    inv_laplace_dirichlet,
    inv_laplace_neumann,
)
from halfplane_vorticity.vorticity_semigroup import (
    DEFAULT_CONFIG,
    KernelConfig,
    apply_T0,
    apply_T_composite,
    apply_T_kernel,
    green_star_11,
    kernel_W,
    kernel_W0,
    kernel_W_star,
)

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    FloatArray = NDArray[np.float64]

logger = logging.getLogger(__name__)

SEED = 20240601


@dataclass
class CheckResult:
    """Result of one property check."""

    suite: str
    name: str
    value: float
    tolerance: float
    passed: bool
    details: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def check(suite: str, name: str, value: float, tolerance: float, details: str | None = None) -> CheckResult:
    """Pass when ``value <= tolerance`` and ``value`` is finite."""
    value = float(value)
    passed = math.isfinite(value) and value <= tolerance
    return CheckResult(suite, name, value, tolerance, passed, details)


def decreasing(suite: str, name: str, values: list[float], details: str | None = None) -> CheckResult:
    ratios = [b / a if a > 0 else math.inf for a, b in zip(values, values[1:], strict=False)]
    worst = max(ratios)
    passed = math.isfinite(worst) and worst < 1.0
    shown = details or ", ".join(f"{v:.4g}" for v in values)
    return CheckResult(suite, name, worst, 1.0, passed, shown)


def _rel_sup(measured: ArrayLike, reference: ArrayLike) -> float:
    """Sup-norm error relative to the sup of ``reference``."""
    a = np.asarray(measured, dtype=np.float64)
    b = np.asarray(reference, dtype=np.float64)
    scale = float(np.max(np.abs(b)))
    return float(np.max(np.abs(a - b))) / (scale if scale > 0 else 1.0)


def _l1(f: ScalarField) -> float:
    return lq_norm(f, 1.0)


def _rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


def kernels_suite(grid: HalfPlaneGrid, cfg: KernelConfig) -> list[CheckResult]:
    suite = "kernels"
    rng = _rng()
    x = rng.uniform(-1.0, 1.0, size=(50, 2))
    t = 0.5
    worst_scaling = 0.0
    for lam in (0.5, 2.0, 10.0):
        scaled = lam**2 * np.asarray(gauss2d(lam * x, lam**2 * t))
        worst_scaling = max(worst_scaling, _rel_sup(scaled, gauss2d(x, t)))
        P = np.asarray(poisson_P(x[:, 0], np.abs(x[:, 1]) + 0.1))
        P_scaled = lam * np.asarray(poisson_P(lam * x[:, 0], lam * (np.abs(x[:, 1]) + 0.1)))
        worst_scaling = max(worst_scaling, _rel_sup(P_scaled, P))
    factor = np.asarray(gauss1d(x[:, 0], t)) * np.asarray(gauss1d(x[:, 1], t))

    r = np.linspace(-40.0, 40.0, 4001)
    w = np.full(r.size, r[1] - r[0])
    w[[0, -1]] *= 0.5
    mass_1d = float(np.sum(w * np.asarray(gauss1d(r, 1.0))))
    mass_P, _ = integrate.quad(lambda s: float(poisson_P(s, 1.0)), -np.inf, np.inf, epsabs=1e-12)

    upper = np.column_stack([x[:, 0], np.abs(x[:, 1]) + 0.1])
    dE1 = np.asarray(grad_E(upper)[0])
    half_Q = -0.5 * np.asarray(conj_poisson_Q(upper[:, 0], upper[:, 1]))

    y = np.array([0.3, 1.0])
    boundary = np.column_stack([x[:, 0], np.zeros(len(x))])
    on_line = np.max(np.abs(np.asarray(dirichlet_green(boundary, y))))
    k1, k2 = biot_savart_kernel(upper, np.array([0.3, 0.0]))
    boundary_source = float(np.max(np.abs(np.concatenate([np.ravel(k1), np.ravel(k2)]))))

    targets = upper + np.array([0.0, 2.0])
    h = 1e-4
    e1 = np.array([h, 0.0])
    e2 = np.array([0.0, h])
    div = (
        np.asarray(biot_savart_kernel(targets + e1, y)[0])
        - np.asarray(biot_savart_kernel(targets - e1, y)[0])
        + np.asarray(biot_savart_kernel(targets + e2, y)[1])
        - np.asarray(biot_savart_kernel(targets - e2, y)[1])
    ) / (2 * h)
    dist = np.hypot(*(targets - y).T)
    speed = np.hypot(*biot_savart_kernel(targets, y))
    div_scaled = float(np.max(np.abs(div) * dist / speed))

    return [
        check(suite, "heat and Poisson scaling", worst_scaling, 1e-13),
        check(suite, "gauss2d factorization", _rel_sup(factor, gauss2d(x, t)), 1e-13),
        check(suite, "gauss1d mass", abs(mass_1d - 1.0), 1e-8),
        check(suite, "poisson_P mass", abs(mass_P - 1.0), 1e-6),
        check(suite, "d1 E = -Q/2", _rel_sup(dE1, half_Q), 1e-13),
        check(suite, "Dirichlet Green vanishes on boundary", on_line, 1e-14),
        check(suite, "Biot-Savart kernel of boundary source", boundary_source, 0.0),
        check(suite, "Biot-Savart kernel divergence", div_scaled, 1e-6),
    ]


# ---------------------------------------------------------------------------
# line_ops
# ---------------------------------------------------------------------------


def mean_zero_check(half_width: float = 200.0, n: int = 16385, pad_factor: int = DEFAULT_PAD) -> float:
    """``int A G0(x1, 1) dx1`` over the whole line.

    ``A G0`` decays like ``(1 + 6 / x1^2) / (pi x1^2)``. The padded transform
    returns its periodization, so the window integral carries the images at
    multiples of the period ``P``; they are removed in closed form and the
    tails beyond the window added back.
    """
    g = LineSamples.from_function(-half_width, half_width, n, lambda s: gauss1d(s, 1.0))
    window = apply_A(g, pad_factor=pad_factor).integral()
    period = pad_factor * n * g.h
    a = half_width / period
    # sum over k != 0 of int_{-L}^{L} dx / (pi (x + k P)^2)
    images = 4 * half_width / (math.pi * period**2) * (1 / (2 * a**2) - math.pi / (2 * a * math.tan(math.pi * a)))
    tails = 2 / (math.pi * half_width) + 4 / (math.pi * half_width**3)
    return window - images + tails


def line_ops_suite(grid: HalfPlaneGrid, cfg: KernelConfig) -> list[CheckResult]:
    suite = "line_ops"
    pad = cfg.pad_factor
    wide = LineSamples.from_function(-200.0, 200.0, 16385, lambda s: poisson_P(s, 1.0))
    inner = np.abs(wide.x) <= 100.0
    conj = hilbert(wide, pad_factor=pad)
    hilbert_err = float(np.max(np.abs(conj.values - np.asarray(conj_poisson_Q(wide.x, 1.0)))[inner]))
    evolved = poisson_semigroup(wide, 0.5, pad_factor=pad)
    poisson_err = float(np.max(np.abs(evolved.values - np.asarray(poisson_P(wide.x, 1.5)))[inner]))

    # spectrum vanishes at xi = 0, so H and e^{sA} keep it localized in the window
    packet = LineSamples.from_function(-20.0, 20.0, 1024, lambda s: np.exp(-(s**2)) * np.cos(10 * s))
    twice = hilbert(hilbert(packet, pad_factor=pad), pad_factor=pad)
    composed = poisson_semigroup(poisson_semigroup(packet, 0.2, pad_factor=pad), 0.3, pad_factor=pad)
    direct = poisson_semigroup(packet, 0.5, pad_factor=pad)
    bump = LineSamples.from_function(-20.0, 20.0, 1024, lambda s: np.exp(-(s**2)))

    heat0 = LineSamples.from_function(-20.0, 20.0, 1024, lambda s: gauss1d(s, 0.5))
    heat_err = float(np.max(np.abs(line_heat(heat0, 0.25, pad_factor=pad).values - np.asarray(gauss1d(heat0.x, 0.75)))))
    routes = _rel_sup(
        line_heat(heat0, 0.25, pad_factor=pad, method="spectral").values,
        line_heat(heat0, 0.25, pad_factor=pad, method="quadrature").values,
    )
    generator = _rel_sup(apply_A(bump, pad_factor=pad).values, -hilbert(derivative(bump, pad_factor=pad), pad_factor=pad).values)
    parseval = abs(
        math.sqrt(np.sum(hilbert(packet, pad_factor=pad).values ** 2)) / math.sqrt(np.sum(packet.values**2)) - 1.0
    )

    return [
        check(suite, "H(P_1) = Q_1", hilbert_err, 1e-4),
        check(suite, "H^2 = -I", _rel_sup(twice.values, -packet.values), 1e-8),
        check(suite, "e^{sA} P_t = P_{s+t}", poisson_err, 1e-5),
        check(suite, "Poisson semigroup composition", _rel_sup(composed.values, direct.values), 1e-10),
        check(suite, "Gaussian line heat semigroup", heat_err, 1e-8),
        check(suite, "line heat spectral vs quadrature", routes, 1e-8),
        check(suite, "A = -H d1", generator, 1e-9),
        check(suite, "Hilbert transform is an isometry", parseval, 1e-10),
        check(suite, "mean of A G0 vanishes", abs(mean_zero_check()), 1e-6),
    ]


# ---------------------------------------------------------------------------
# semigroup
# ---------------------------------------------------------------------------


def _density(name: str, grid: HalfPlaneGrid) -> ScalarField:
    density = builtin_initial(name, {}, grid).density
    if density is None:
        raise InvalidParameterError(f"Scenario {name} has no gridded density")
    return density


def commutation_errors(grid: HalfPlaneGrid, t: float = 0.5) -> tuple[float, float]:
    """Relative sup errors of the two commutation rules between ``d2`` and the heat semigroups.

    ``e^{t Delta_D} d2 phi = d2 e^{t Delta_N} phi``, and
    ``e^{t Delta_N} d2 phi = d2 e^{t Delta_D} phi - 2 G0(x2, t) e^{t d11} phi(., 0)``,
    for a Gaussian ``phi`` that does not vanish on the boundary. ``d2 phi`` is
    exact and the outer ``d2`` acts on the image kernels.
    """
    phi = ScalarField.from_function(grid, lambda a, b: np.exp(-(a**2 + (b - 1.0) ** 2) / 2))
    d2_phi = ScalarField.from_function(grid, lambda a, b: -(b - 1.0) * np.exp(-(a**2 + (b - 1.0) ** 2) / 2))
    dirichlet = _rel_sup(heat_dirichlet(d2_phi, t).values, d2_heat_neumann(phi, t).values)
    transported = line_heat(phi.trace(), t).values
    trace_term = 2.0 * np.asarray(gauss1d(grid.x2, t))[:, None] * transported[None, :]
    neumann = _rel_sup(heat_neumann(d2_phi, t).values, d2_heat_dirichlet(phi, t).values - trace_term)
    return dirichlet, neumann


def neumann_l1_decay(times: tuple[float, ...] = (1.0, 4.0, 16.0)) -> list[float]:
    """L^1 norms of ``e^{t Delta_N}`` applied to the trace-zero dipole, on a window wide enough for ``t = 16``."""
    wide = HalfPlaneGrid.symmetric(32.0, 32.0, 513, 257)
    dipole = _density("trace_zero_dipole", wide)
    return [_l1(heat_neumann(dipole, t)) for t in times]


def inverse_laplacian_errors(grid: HalfPlaneGrid) -> tuple[float, float]:
    """Checks of the Neumann inverse Laplacian.

    Returns ``sup |d2 (psi_N - psi_D)| / sup |d2 psi_D|`` for the trace-zero
    dipole, and the 5-point Laplacian of ``psi_N`` for a Gaussian blob at
    nodes three units or more from its centre, relative to the peak density.
    """
    dipole = VorticityMeasure.from_density(_density("trace_zero_dipole", grid))
    psi_d = inv_laplace_dirichlet(dipole).values
    psi_n = inv_laplace_neumann(dipole).values
    d2 = lambda v: (v[2:] - v[:-2]) / (2 * grid.h2)  # noqa: E731
    image = float(np.max(np.abs(d2(psi_n - psi_d)))) / float(np.max(np.abs(d2(psi_d))))

    blob = _density("smooth_blob", grid)
    lap = five_point_laplacian(inv_laplace_neumann(VorticityMeasure.from_density(blob)))
    X1, X2 = grid.mesh()
    far = np.hypot(X1 - DEFAULT_BLOB["x1"], X2 - DEFAULT_BLOB["x2"])[1:-1, 1:-1] >= 3.0
    harmonic = float(np.max(np.abs(lap[far]))) / float(np.max(np.abs(blob.values)))
    return image, harmonic


def semigroup_suite(grid: HalfPlaneGrid, cfg: KernelConfig) -> list[CheckResult]:
    suite = "semigroup"
    X1, X2 = grid.mesh()
    atom = VorticityMeasure.point_vortex(1.0, (0.0, 1.0))
    exact = np.asarray(gauss2d(np.stack([X1, X2 - 1.0], axis=-1), 0.25)) + np.asarray(
        gauss2d(np.stack([X1, X2 + 1.0], axis=-1), 0.25)
    )
    atom_err = _rel_sup(heat_neumann(atom, 0.25, grid).values, exact)

    f = _density("smooth_blob", grid)
    # the heat step weights source rows with the end-corrected rule
    initial = integrate_field(f, end_corrected=True)
    mass = abs(integrate_field(heat_neumann(f, 0.1)) - initial) / abs(initial)
    commute_d, commute_n = commutation_errors(grid)
    image, harmonic = inverse_laplacian_errors(grid)
    dirichlet = heat_dirichlet(f, 0.1)
    boundary = float(np.max(np.abs(dirichlet.values[0]))) / float(np.max(np.abs(dirichlet.values)))
    law = _rel_sup(heat_dirichlet(heat_dirichlet(f, 0.1), 0.1).values, heat_dirichlet(f, 0.2).values)
    sup_ok = float(np.max(np.abs(heat_neumann(f, 0.1).values))) / float(np.max(np.abs(f.values)))

    psi = inv_laplace_dirichlet(VorticityMeasure.from_density(f))
    residual = -five_point_laplacian(psi) - f.values[1:-1, 1:-1]
    relative = float(np.sum(np.abs(residual))) / float(np.sum(np.abs(f.values[1:-1, 1:-1])))

    return [
        check(suite, "Neumann heat of an atom", atom_err, 1e-14),
        check(suite, "Neumann heat conserves mass", mass, 1e-8),
        check(suite, "Dirichlet heat vanishes on boundary", boundary, 1e-12),
        check(suite, "Dirichlet heat semigroup law", law, 1e-6),
        check(suite, "maximum principle", sup_ok, 1.0),
        check(suite, "e^{t Delta_D} d2 = d2 e^{t Delta_N}", commute_d, 1e-5),
        check(suite, "e^{t Delta_N} d2 = d2 e^{t Delta_D} - trace term", commute_n, 1e-5),
        decreasing(suite, "Neumann L1 decay of zero-mass data", neumann_l1_decay()),
        check(suite, "-Delta psi = omega (5-point)", relative, 2e-2),
        check(suite, "stream function vanishes on boundary", float(np.max(np.abs(psi.values[0]))), 1e-12),
        check(suite, "d2 of Neumann minus Dirichlet inverse", image, 1e-4),
        check(suite, "Neumann inverse harmonic off support", harmonic, 1e-4),
    ]


# ---------------------------------------------------------------------------
# biot_savart
# ---------------------------------------------------------------------------


def biot_savart_suite(grid: HalfPlaneGrid, cfg: KernelConfig) -> list[CheckResult]:
    suite = "biot_savart"
    kappa = 0.7
    atom = VorticityMeasure.point_vortex(kappa, (0.0, 1.0))
    u = velocity_from_measure(atom, grid)
    row = kappa / (math.pi * (grid.x1**2 + 1.0))
    trace = boundary_trace(atom, grid)

    blob = VorticityMeasure.from_density(_density("smooth_blob", grid))
    v = velocity_from_measure(blob, grid)
    speed = float(np.max(v.magnitude()))
    div = float(np.max(np.abs(v.divergence()))) * min(grid.h1, grid.h2) / speed

    mixed = atom + blob
    window = boundary_trace(mixed, grid).integral() + trace_tail_mass(mixed, grid.x1_min, grid.x1_max)
    mass_gap = abs(window - mixed.total_mass())

    once = normalize_measure(mixed, grid)
    twice = normalize_measure(once, grid)
    idempotent = float(np.max(np.abs(twice.boundary_sheet.values - once.boundary_sheet.values)))  # type: ignore[union-attr]
    same_velocity = _rel_sup(velocity_from_measure(once, grid).u1, velocity_from_measure(mixed, grid).u1)

    dipole = builtin_initial("trace_zero_dipole", {}, grid)
    dipole_trace = boundary_trace(dipole, grid).max_abs()
    positive = float(max(0.0, -np.min(boundary_trace(mixed, grid).values)))

    return [
        check(suite, "u1 on boundary of an atom", float(np.max(np.abs(u.u1[0] - row))), 1e-12),
        check(suite, "u2 on boundary", float(np.max(np.abs(u.u2[0]))), 1e-12),
        check(suite, "boundary trace of an atom", float(np.max(np.abs(trace.values - row))), 1e-12),
        check(suite, "velocity divergence (scaled)", div, 1e-6),
        check(suite, "trace integral equals total mass", mass_gap, 1e-4),
        check(suite, "normalization is idempotent", idempotent, 1e-10),
        check(suite, "normalization keeps the velocity", same_velocity, 1e-12),
        check(suite, "trace-zero dipole trace", dipole_trace, 1e-6),
        check(suite, "trace of a nonnegative measure is nonnegative", positive, 1e-12),
    ]


# ---------------------------------------------------------------------------
# T_operator
# ---------------------------------------------------------------------------


def _random_pairs(rng: np.random.Generator, n: int) -> tuple[FloatArray, FloatArray]:
    x = np.column_stack([rng.uniform(-2, 2, n), rng.uniform(0.1, 2, n)])
    y = np.column_stack([rng.uniform(-2, 2, n), rng.uniform(0.1, 2, n)])
    return x, y


def semigroup_law_error(mu: VorticityMeasure, t: float, grid: HalfPlaneGrid, cfg: KernelConfig = DEFAULT_CONFIG) -> float:
    """``||T(2t) mu - T(t) T(t) mu||_1`` on ``grid``.

    The intermediate field keeps its slowly decaying ``x1`` tails on a window
    three times as wide, and the second step is read back on the inner third.
    """
    wide = grid.widened(grid.n1 - 1)
    half = apply_T_composite(mu, t, wide, cfg)
    twice = apply_T_composite(VorticityMeasure.from_density(half), t, wide, cfg)
    inner = twice.values[:, grid.n1 - 1 : 2 * grid.n1 - 1]
    return _l1(apply_T_composite(mu, 2 * t, grid, cfg) - ScalarField(grid, inner))


def boundary_law_error(mu: VorticityMeasure, t: float, grid: HalfPlaneGrid, cfg: KernelConfig = DEFAULT_CONFIG) -> float:
    """``sup |d2 f - A f|`` on ``x2 = 0`` for ``f = T(t) mu``, scaled by ``h2 / sup |f|``.

    ``d2`` is the fourth-order one-sided difference. ``A`` acts on the
    boundary row of a window half again as wide on each side, so its
    ``x1^-2`` reach is not cut at the edges of ``grid``.
    """
    margin = grid.n1 // 2
    wide = grid.widened(margin)
    f = apply_T_composite(mu, t, wide, cfg).values
    h2 = grid.h2
    d2 = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h2)
    row = LineSamples(wide.x1_min, wide.x1_max, f[0])
    a_row = apply_A(row, pad_factor=cfg.pad_factor).values
    inner = slice(margin, margin + grid.n1)
    return float(np.max(np.abs(d2 - a_row)[inner])) * h2 / float(np.max(np.abs(f[:, inner])))


def kernel_l1_bounds(
    grid: HalfPlaneGrid,
    cfg: KernelConfig = DEFAULT_CONFIG,
    heights: tuple[float, ...] = (0.1, 0.3, 1.0, 3.0),
) -> FloatArray:
    """``int |W(x, (0, y2), 1)| dx`` over the window of ``grid`` for each source height."""
    return np.array([_l1(apply_T_kernel(VorticityMeasure.point_vortex(1.0, (0.0, y2)), 1.0, grid, cfg)) for y2 in heights])


def coarsened(grid: HalfPlaneGrid) -> HalfPlaneGrid:
    """Same window with about half the nodes per direction."""
    return HalfPlaneGrid(grid.x1_min, grid.x1_max, grid.x2_max, (grid.n1 + 1) // 2, (grid.n2 + 1) // 2)


def T_operator_suite(grid: HalfPlaneGrid, cfg: KernelConfig) -> list[CheckResult]:
    suite = "T_operator"
    rng = _rng()
    x, y = _random_pairs(rng, 10)
    lam = 2.0
    scaling = _rel_sup(lam**2 * np.asarray(kernel_W(lam * x, lam * y, lam**2 * 0.3, cfg)), kernel_W(x, y, 0.3, cfg))

    x, y = _random_pairs(rng, 50)
    w_star = np.asarray(kernel_W_star(x, y, 1.0, cfg, method="spectral"))
    g_star = -np.asarray(green_star_11(y, x, 1.0, cfg))
    symmetry = _rel_sup(w_star, g_star)

    atom = VorticityMeasure.point_vortex(1.0, (0.0, 1.0))
    direct = apply_T_kernel(atom, 0.25, grid, cfg)
    composite = apply_T_composite(atom, 0.25, grid, cfg)
    routes = _rel_sup(direct.values, composite.values)
    law = semigroup_law_error(atom, 0.25, grid, cfg)
    bc = boundary_law_error(atom, 0.25, grid, cfg)

    phi = ScalarField.from_function(grid, lambda a, b: np.exp(-((a - 0.3) ** 2 + (b - 0.8) ** 2)))
    trace = boundary_trace(atom, grid)
    limit = measure_pairing(atom, phi) - float(np.sum(trace.values * phi.values[0] * grid.column_weights))
    vague = [
        abs(measure_pairing(VorticityMeasure.from_density(apply_T_composite(atom, t, grid, cfg)), phi) - limit)
        for t in (0.04, 0.01)
    ]

    # the window grows with sqrt(t) so every field is sampled alike
    long_times = (1.0, 4.0, 16.0)
    long_fields = [apply_T_kernel(atom, t, grid.scaled(math.sqrt(t)), cfg) for t in long_times]
    decay = []
    for q in (1.0, 2.0, math.inf):
        values = [t ** (1 - 1 / q) * lq_norm(f, q) for t, f in zip(long_times, long_fields, strict=True)]
        decay.append(max(b / a for a, b in zip(values, values[1:], strict=False)))

    bounds = kernel_l1_bounds(grid, cfg)
    stability = float(np.max(np.abs(kernel_l1_bounds(coarsened(grid), cfg) - bounds) / bounds))
    uniform = max(_l1(apply_T_kernel(atom, t, grid.scaled(math.sqrt(t)), cfg)) for t in (0.1, 1.0, 10.0))

    sheet = builtin_initial("vortex_sheet", {}, grid)
    sheet_times = (0.04, 0.01)
    sheet_fields = [apply_T_composite(sheet, t, grid, cfg) for t in sheet_times]
    sheet_ratios = []
    for q in (4.0 / 3.0, 2.0, math.inf):
        norms = [t ** (1 - 1 / q) * lq_norm(f, q) for t, f in zip(sheet_times, sheet_fields, strict=True)]
        sheet_ratios.append(norms[1] / norms[0])

    omega0 = _density("trace_zero_dipole", grid)
    dipole = VorticityMeasure.from_density(omega0)
    l1_cont = [_l1(apply_T_composite(dipole, t, grid, cfg) - omega0) for t in (0.04, 0.01)]

    t_fd = 0.1
    fd = fd_oracle_linear(omega0, t_fd, pad_factor=cfg.pad_factor)
    oracle = _l1(apply_T_kernel(dipole, t_fd, grid, cfg) - fd) / _l1(omega0)
    h = max(grid.h1, grid.h2)

    return [
        check(suite, "W scaling", scaling, 1e-6),
        check(suite, "W* = -G*11 transposed", symmetry, 1e-4),
        check(suite, "kernel path vs composite", routes, 1e-3),
        check(suite, "T(0.5) = T(0.25) T(0.25)", law, 1e-3),
        check(suite, "boundary law d2 = A at x2 = 0", bc, 1e-3),
        decreasing(suite, "vague convergence error decreasing", vague),
        CheckResult(suite, "long-time decay decreasing", max(decay), 1.0, max(decay) < 1.0),
        check(suite, "W L1 bound stable under refinement", stability, 2e-2, f"C = {float(np.max(bounds)):.4g}"),
        check(suite, "T(t) L1 bound over t / C", uniform / float(np.max(bounds)), 1.1),
        CheckResult(suite, "vortex sheet L^q norms decreasing", max(sheet_ratios), 1.0, max(sheet_ratios) < 1.0),
        decreasing(suite, "L1 continuity decreasing", l1_cont),
        check(suite, "finite-difference oracle (L1 / h)", oracle / h, 5.0),
    ]


# ---------------------------------------------------------------------------
# appendix
# ---------------------------------------------------------------------------


def w0_window_mass(
    half_width: float,
    cfg: KernelConfig = DEFAULT_CONFIG,
    *,
    x: tuple[float, float] = (0.0, 1.0),
    t: float = 1.0,
) -> float:
    """``int |W0(x, y, t)| dy`` over ``[-R, R] x [0, R]`` on a 128 x 64 trapezoid grid.

    Grows without bound in ``R``: far from the boundary the kernel only decays
    like ``|x - y*|^-2``.
    """
    grid = HalfPlaneGrid.symmetric(half_width, half_width, 128, 64)
    total = 0.0
    for j, y2 in enumerate(grid.x2):
        y = np.column_stack([grid.x1, np.full(grid.n1, y2)])
        total += float(np.sum(grid.weights[j] * np.abs(np.asarray(kernel_W0(x, y, t, cfg)))))
    return total


def w0_harmonic_gap(cfg: KernelConfig = DEFAULT_CONFIG, *, t: float = 1.0, h: float = 1e-2) -> float:
    """5-point ``y``-Laplacian of ``W0 - W`` relative to that of ``W0``.

    The two kernels differ by a Poisson extension in ``y``, which is what makes
    them agree on data whose boundary velocity vanishes.
    """
    x = np.array([0.3, 0.8])
    points = np.array([[0.0, 1.0], [0.5, 0.6], [-0.4, 1.5], [1.2, 2.0]])
    steps = np.array([[0.0, 0.0], [h, 0.0], [-h, 0.0], [0.0, h], [0.0, -h]])
    stencil = np.array([-4.0, 1.0, 1.0, 1.0, 1.0]) / h**2
    y = points[:, None, :] + steps[None, :, :]
    w0 = np.asarray(kernel_W0(x, y, t, cfg)) @ stencil
    w = np.asarray(kernel_W(x, y, t, cfg, method="spectral")) @ stencil
    return float(np.max(np.abs(w0 - w))) / float(np.max(np.abs(w0)))


def appendix_suite(grid: HalfPlaneGrid, cfg: KernelConfig) -> list[CheckResult]:
    suite = "appendix"
    omega0 = _density("trace_zero_dipole", grid)
    dipole = VorticityMeasure.from_density(omega0)
    mass = _l1(omega0)
    equivalence = _l1(apply_T0(dipole, 0.25, grid, cfg) - apply_T_composite(dipole, 0.25, grid, cfg)) / mass
    convergence = [_l1(apply_T0(dipole, t, grid, cfg) - omega0) for t in (0.04, 0.01)]

    growth = [w0_window_mass(R, cfg) for R in (8.0, 16.0, 32.0)]
    zero = apply_T0(VorticityMeasure(), 0.25, grid, cfg)

    return [
        check(suite, "T0 = T on trace-zero data", equivalence, 1e-3),
        decreasing(suite, "T0 L1 convergence decreasing", convergence),
        decreasing(suite, "T0 kernel mass grows with window", [1.0 / g for g in growth]),
        check(suite, "W0 - W harmonic in y", w0_harmonic_gap(cfg), 1e-3),
        check(suite, "T0 of zero measure", float(np.max(np.abs(zero.values))), 0.0),
    ]


# ---------------------------------------------------------------------------
# nonlinear
# ---------------------------------------------------------------------------


def duhamel_identity_errors(grid: HalfPlaneGrid, cfg: KernelConfig = DEFAULT_CONFIG, tau: float = 0.25) -> tuple[float, float]:
    """Cross-checks of the Duhamel integrand.

    Returns the relative sup distance between ``int grad_y W . (omega u) dy``
    and ``-T(tau) div(omega u)`` for a Gaussian blob carried by its own
    velocity, and the relative ``x1``-asymmetry of the Duhamel term for an even
    ``omega`` with odd ``u1`` and even ``u2``.
    """
    omega = _density("smooth_blob", grid)
    u = velocity_from_measure(VorticityMeasure.from_density(omega), grid)
    X1, X2 = grid.mesh()
    width = DEFAULT_BLOB["width"]
    # grad omega of the Gaussian blob
    g1 = -(X1 - DEFAULT_BLOB["x1"]) / width**2 * omega.values
    g2 = -(X2 - DEFAULT_BLOB["x2"]) / width**2 * omega.values
    div = ScalarField(grid, u.u1 * g1 + u.u2 * g2)
    flux = flux_term((omega.values * u.u1, omega.values * u.u2), tau, grid, cfg)
    identity = _rel_sup(flux.values, -apply_T_kernel(VorticityMeasure.from_density(div), tau, grid, cfg).values)

    mesh = TimeMesh.graded(tau, 4)
    bump = np.exp(-(X1**2 + (X2 - 1.5) ** 2))
    velocity = VectorField(grid, X1 * bump, X2 * bump)
    path = VorticityPath(mesh.nodes, (omega,) * mesh.n, (velocity,) * mesh.n)
    out = duhamel_term(path, tau, mesh, grid, cfg).values
    mirror = _rel_sup(out[:, ::-1], out)
    return identity, mirror


def trace_compatibility(grid: HalfPlaneGrid, cfg: KernelConfig = DEFAULT_CONFIG, t_end: float = 0.5) -> float:
    """Largest boundary velocity of a small trace-zero Picard solution, relative to its peak speed.

    Every iterate keeps ``u1(., 0) = 0``, so three sweeps on a four-node mesh
    with two snapshots suffice.
    """
    mu0 = builtin_initial("trace_zero_dipole", {"amplitude": 0.05}, grid)
    mesh = TimeMesh.graded(t_end, 4)
    solution = picard_solve(mu0, t_end, grid, mesh, max_iter=3, snapshots=[t_end / 2, t_end], cfg=cfg)
    worst = 0.0
    for omega, u in zip(solution.omega, solution.velocity, strict=True):
        trace = boundary_trace(VorticityMeasure.from_density(omega), grid)
        worst = max(worst, trace.max_abs() / float(np.max(u.magnitude())))
    return worst


def nonlinear_suite(grid: HalfPlaneGrid, cfg: KernelConfig) -> list[CheckResult]:
    suite = "nonlinear"
    tol = 1e-6
    t_end = 0.5
    mesh = TimeMesh.graded(t_end, 8)
    mu0 = builtin_initial("point_vortex", {"amplitude": 0.05}, grid)
    solution = picard_solve(mu0, t_end, grid, mesh, tol=tol, max_iter=20, cfg=cfg)
    ratios = solution.metrics.contraction_ratios
    contraction = max(ratios) if ratios else 0.0
    residual = mild_residual(solution, mu0, mesh, grid, cfg)
    u = solution.velocity[-1]
    div = float(np.max(np.abs(u.divergence()))) * min(grid.h1, grid.h2) / float(np.max(u.magnitude()))

    # odd symmetry holds iterate by iterate, so a few sweeps show it
    pair = builtin_initial("vortex_pair", {"amplitude": 0.05}, grid)
    pair_solution = picard_solve(pair, t_end, grid, mesh, tol=tol, max_iter=3, cfg=cfg)
    w = pair_solution.omega[-1].values
    symmetry = _rel_sup(w[:, ::-1], -w)

    identity, mirror = duhamel_identity_errors(grid, cfg)
    trace = trace_compatibility(grid, cfg)

    return [
        check(suite, "Picard converged", 0.0 if solution.converged else 1.0, 0.0, f"{solution.iterations} iterates"),
        check(suite, "contraction ratio", contraction, 0.5),
        check(suite, "mild residual / tol", residual / tol, 3.0),
        check(suite, "velocity divergence (scaled)", div, 1e-5),
        check(suite, "odd symmetry in x1 preserved", symmetry, 1e-9),
        check(suite, "Duhamel integrand = -T div(omega u)", identity, 1e-2),
        check(suite, "Duhamel term even for mirrored input", mirror, 1e-10),
        check(suite, "boundary velocity of trace-zero solution", trace, 1e-3),
    ]


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

SuiteRunner = Callable[[HalfPlaneGrid, KernelConfig], list[CheckResult]]


@dataclass(frozen=True)
class SuiteInfo:
    """Information about a verification suite."""

    name: str
    description: str
    runner: SuiteRunner
    slow: bool = False


SUITES: dict[str, SuiteInfo] = {
    "kernels": SuiteInfo("kernels", "Scaling, normalization and symmetry of the closed-form kernels", kernels_suite),
    "line_ops": SuiteInfo("line_ops", "Hilbert transform, Poisson and heat semigroups on the line", line_ops_suite),
    "semigroup": SuiteInfo("semigroup", "Half-plane heat semigroups and inverse Laplacians", semigroup_suite),
    "biot_savart": SuiteInfo("biot_savart", "Velocity, boundary trace and normalization", biot_savart_suite),
    "T_operator": SuiteInfo("T_operator", "Structure of the vorticity semigroup T(t)", T_operator_suite, slow=True),
    "appendix": SuiteInfo("appendix", "Trace-zero semigroup T0(t)", appendix_suite, slow=True),
    "nonlinear": SuiteInfo("nonlinear", "Picard iteration of the mild Navier-Stokes equation", nonlinear_suite, slow=True),
}
ALL = "all"


def list_suites() -> list[str]:
    return [*SUITES, ALL]


def run_suite(
    name: str,
    grid: HalfPlaneGrid | None = None,
    cfg: KernelConfig = DEFAULT_CONFIG,
) -> list[CheckResult]:
    """Run suite ``name`` (or every suite for ``all``) and collect its checks.

    Raises:
        UnknownSuiteError: If the suite is not registered.
    """
    if name != ALL and name not in SUITES:
        raise UnknownSuiteError(name, list_suites())
    grid = grid or HalfPlaneGrid.default()
    names = list(SUITES) if name == ALL else [name]
    results: list[CheckResult] = []
    for suite in names:
        start = time.perf_counter()
        checks = SUITES[suite].runner(grid, cfg)
        logger.info("Suite %s: %d checks in %.1f s", suite, len(checks), time.perf_counter() - start)
        for result in checks:
            if not result.passed:
                logger.warning("%s / %s failed: %.3e > %.3e", suite, result.name, result.value, result.tolerance)
        results.extend(checks)
    return results
