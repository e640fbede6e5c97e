"""Mild solutions of the vorticity equation by Picard iteration.

The Duhamel term is applied in vorticity-kernel form,
``int_0^t int grad_y W(x, y, t - s) . (omega u)(y, s) dy ds``, which needs
neither the Helmholtz projection nor the boundary pressure. Time integrals use
product quadrature on the cells of a :class:`TimeMesh`: the kernel is
integrated over each cell in closed spectral form while ``omega u`` is frozen
at the cell's node.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache, partial
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy.special import roots_legendre

from halfplane_vorticity.biot_savart import velocity_from_measure
from halfplane_vorticity.exceptions import InvalidConfigError, InvalidParameterError
from halfplane_vorticity.grid_core import (
    HalfPlaneGrid,
    ScalarField,
    TimeMesh,
    VectorField,
    VorticityMeasure,
    lq_norm,
)
from halfplane_vorticity.kernels import check_time
from halfplane_vorticity.line_ops import DEFAULT_PAD, apply_multiplier, discrete_A_symbol
from halfplane_vorticity.vorticity_semigroup import (
    DEFAULT_CONFIG,
    KernelConfig,
    RowKernelOperator,
    apply_T_composite,
    grad_y_pair_hat,
    grad_y_tail,
)

if TYPE_CHECKING:
    from collections.abc import Callable

    from numpy.typing import NDArray

    FloatArray = NDArray[np.float64]
    ComplexArray = NDArray[np.complex128]

logger = logging.getLogger(__name__)

DEFAULT_Q = 4.0 / 3.0
DEFAULT_P = 4.0
TAU_NODES = 6
# source rows of omega u below this fraction of its peak are skipped
NEGLIGIBLE = 1e-13


@dataclass(frozen=True)
class VorticityPath:
    """Vorticity and velocity sampled at increasing times."""

    times: FloatArray
    omega: tuple[ScalarField, ...]
    velocity: tuple[VectorField, ...]

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=np.float64)
        if not (times.size == len(self.omega) == len(self.velocity)):
            raise InvalidParameterError("Path times, vorticity and velocity differ in length")
        object.__setattr__(self, "times", times)

    def index(self, t: float) -> int:
        hits = np.flatnonzero(np.isclose(self.times, t, rtol=1e-12, atol=0.0))
        if hits.size == 0:
            raise InvalidParameterError(f"Path has no sample at t={t!r}")
        return int(hits[0])

    def nonlinearity(self, t: float) -> tuple[FloatArray, FloatArray]:
        """``omega u`` at a sampled time."""
        k = self.index(t)
        w = self.omega[k].values
        return w * self.velocity[k].u1, w * self.velocity[k].u2


@dataclass
class IterationMetrics:
    """Per-iterate Picard diagnostics.

    ``N`` is ``sup_t t^{1-1/q} ||omega_j||_q``, ``L`` is
    ``sup_t t^{1/2-1/p} (||u_j||_p + t^{1/2} ||grad u_j||_p)`` and
    ``velocity_sup`` is ``sup_t t^{1/2} ||u_j||_inf``. ``diff_norms[k]`` is
    the sup over snapshots of the relative L^1 change from iterate ``k + 1``
    to ``k + 2``.
    """

    q: float = DEFAULT_Q
    p: float = DEFAULT_P
    N: list[float] = field(default_factory=list)
    L: list[float] = field(default_factory=list)
    velocity_sup: list[float] = field(default_factory=list)
    diff_norms: list[float] = field(default_factory=list)

    def extend(self, other: IterationMetrics) -> None:
        self.N.extend(other.N)
        self.L.extend(other.L)
        self.velocity_sup.extend(other.velocity_sup)

    @property
    def contraction_ratios(self) -> list[float]:
        d = self.diff_norms
        return [d[k] / d[k - 1] if d[k - 1] > 0 else 0.0 for k in range(1, len(d))]

    @property
    def sobolev_ratios(self) -> list[float]:
        return [v / ell if ell > 0 else 0.0 for v, ell in zip(self.velocity_sup, self.L, strict=True)]

    @property
    def recursion_constants(self) -> list[float]:
        """Measured ``C2`` in ``L_{j+1} <= L_1 + C2 L_j^2``."""
        if not self.L:
            return []
        first = self.L[0]
        return [
            (self.L[j + 1] - first) / self.L[j] ** 2 if self.L[j] > 0 else 0.0
            for j in range(len(self.L) - 1)
        ]

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["contraction_ratios"] = self.contraction_ratios
        data["sobolev_ratios"] = self.sobolev_ratios
        data["recursion_constants"] = self.recursion_constants
        return data


@dataclass
class MildSolution:
    """Snapshots of the converged (or last) Picard iterate."""

    times: FloatArray
    omega: list[ScalarField]
    velocity: list[VectorField]
    metrics: IterationMetrics
    converged: bool
    iterations: int
    path: VorticityPath | None = None


def iteration_metrics(
    path: VorticityPath,
    q: float = DEFAULT_Q,
    p: float = DEFAULT_P,
) -> IterationMetrics:
    """``N_j``, ``L_j`` and ``sup t^{1/2} ||u||_inf`` of one iterate.

    Suprema over time are taken over the sampled times.
    """
    if not 1 < q < 2:
        raise InvalidParameterError(f"q must lie in (1, 2), got {q}")
    if not 2 < p < math.inf:
        raise InvalidParameterError(f"p must lie in (2, inf), got {p}")
    n_sup = l_sup = v_sup = 0.0
    for t, w, u in zip(path.times, path.omega, path.velocity, strict=True):
        speed = ScalarField(u.grid, u.magnitude())
        grad = ScalarField(u.grid, u.gradient_norm())
        n_sup = max(n_sup, t ** (1 - 1 / q) * lq_norm(w, q))
        l_sup = max(l_sup, t ** (0.5 - 1 / p) * (lq_norm(speed, p) + math.sqrt(t) * lq_norm(grad, p)))
        v_sup = max(v_sup, math.sqrt(t) * float(np.max(speed.values)))
    return IterationMetrics(q=q, p=p, N=[n_sup], L=[l_sup], velocity_sup=[v_sup])


# ---------------------------------------------------------------------------
# Duhamel term
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4)
def _unit_legendre(n: int) -> tuple[FloatArray, FloatArray]:
    g, w = roots_legendre(n)
    return 0.5 * (g + 1.0), 0.5 * w


def _tau_rule(lo: float, hi: float, n: int) -> tuple[FloatArray, FloatArray]:
    """Nodes and weights for ``int_lo^hi d tau``, graded as ``tau = hi sigma^2`` when ``lo = 0``."""
    sigma, w = _unit_legendre(n)
    if lo <= 0.0:
        return hi * sigma**2, 2.0 * hi * sigma * w
    return lo + (hi - lo) * sigma, (hi - lo) * w


def _integrated_hat(taus: FloatArray, weights: FloatArray) -> Callable[..., Any]:
    hats = [grad_y_pair_hat(float(tau)) for tau in taus]

    def hat(xi: FloatArray, x2: FloatArray, y2: FloatArray) -> ComplexArray:
        total = weights[0] * hats[0](xi, x2, y2)
        for w, h in zip(weights[1:], hats[1:], strict=True):
            total += w * h(xi, x2, y2)
        return total

    return hat


def _integrated_tail(taus: FloatArray, weights: FloatArray) -> Callable[..., Any]:
    tails = [grad_y_tail(float(tau)) for tau in taus]

    def tail(x2: FloatArray, y2: FloatArray) -> FloatArray:
        return sum((w * c(x2, y2) for w, c in zip(weights, tails, strict=True)), np.zeros((2, x2.size)))

    return tail


def _drop_negligible_rows(values: FloatArray) -> FloatArray:
    """Zero the source rows below ``NEGLIGIBLE`` relative to the largest entry."""
    peak = float(np.max(np.abs(values)))
    rows = np.max(np.abs(values), axis=(0, 2))
    return np.where((rows > NEGLIGIBLE * peak)[None, :, None], values, 0.0)


def flux_term(
    flux: tuple[FloatArray, FloatArray],
    tau: float,
    grid: HalfPlaneGrid,
    cfg: KernelConfig = DEFAULT_CONFIG,
) -> ScalarField:
    """``int grad_y W(x, y, tau) . F(y) dy`` for a flux ``F`` sampled on ``grid``.

    The Duhamel integrand at a single time. When ``F2`` vanishes on the
    boundary this equals ``-T(tau) div F``.
    """
    check_time(tau)
    op = RowKernelOperator(
        grid,
        grad_y_pair_hat(tau),
        pad_factor=cfg.pad_factor,
        tail=grad_y_tail(tau),
        xi_max=cfg.tail_extent / math.sqrt(tau),
    )
    return ScalarField(grid, op.apply_density(np.stack(flux)))


def duhamel_term(
    path: VorticityPath,
    t: float,
    mesh: TimeMesh,
    grid: HalfPlaneGrid,
    cfg: KernelConfig = DEFAULT_CONFIG,
    *,
    tau_nodes: int = TAU_NODES,
) -> ScalarField:
    """``int_0^t int grad_y W(x, y, t - s) . (omega u)(y, s) dy ds`` on ``grid``.

    ``path`` must hold samples at every node of ``mesh``.

    Raises:
        InvalidConfigError: If the mesh does not cover ``(0, t)``.
    """
    check_time(t)
    if t > mesh.t_end * (1 + 1e-12):
        raise InvalidConfigError(
            f"Time mesh ends at {mesh.t_end:g} but the Duhamel term was requested at t={t:g}",
            errors=["time.t_end: mesh does not cover the requested time"],
        )
    edges = mesh.edges
    op: RowKernelOperator | None = None
    acc: ComplexArray | None = None
    for m, s_m in enumerate(mesh.nodes):
        a = float(edges[m])
        if a >= t:
            break
        b = min(float(edges[m + 1]), t)
        n1, n2 = path.nonlinearity(float(s_m))
        if not (np.any(n1) or np.any(n2)):
            continue
        taus, weights = _tau_rule(t - b, t - a, tau_nodes)
        op = RowKernelOperator(
            grid,
            _integrated_hat(taus, weights),
            pad_factor=cfg.pad_factor,
            tail=_integrated_tail(taus, weights),
            xi_max=cfg.tail_extent / math.sqrt(float(taus[0])),
        )
        spectrum = op.spectrum_density(_drop_negligible_rows(np.stack([n1, n2])))
        acc = spectrum if acc is None else acc + spectrum
    if op is None or acc is None:
        return ScalarField.zeros(grid)
    return ScalarField(grid, op.finish(acc))


# ---------------------------------------------------------------------------
# Picard iteration
# ---------------------------------------------------------------------------


def _path_times(mesh: TimeMesh, snapshots: Sequence[float]) -> FloatArray:
    times = np.union1d(mesh.nodes, np.asarray(snapshots, dtype=np.float64))
    return times[times > 0]


def _velocities(omegas: Sequence[ScalarField], grid: HalfPlaneGrid, pool: ThreadPoolExecutor) -> tuple[VectorField, ...]:
    return tuple(pool.map(lambda w: velocity_from_measure(VorticityMeasure.from_density(w), grid), omegas))


def _relative_l1(new: ScalarField, old: ScalarField) -> float:
    scale = lq_norm(new, 1.0)
    diff = lq_norm(new - old, 1.0)
    if scale == 0.0:
        return 0.0 if diff == 0.0 else math.inf
    return diff / scale


def snapshot_times(t_end: float, count: int) -> FloatArray:
    """``count`` equispaced snapshot times ending at ``t_end``."""
    if count < 1:
        raise InvalidParameterError(f"Need at least one snapshot, got {count}")
    return t_end * np.arange(1, count + 1) / count


def picard_solve(
    mu0: VorticityMeasure,
    t_end: float,
    grid: HalfPlaneGrid,
    mesh: TimeMesh | None = None,
    tol: float = 1e-6,
    max_iter: int = 20,
    *,
    snapshots: Sequence[float] | None = None,
    cfg: KernelConfig = DEFAULT_CONFIG,
    q: float = DEFAULT_Q,
    p: float = DEFAULT_P,
    workers: int = 1,
) -> MildSolution:
    """Picard iteration ``omega_{j+1} = T(t) mu0 + Duhamel(omega_j, u_j)``.

    Iterates until the sup over snapshots of the relative L^1 change drops
    below ``tol`` or ``max_iter`` sweeps have run. Not converging is reported
    through ``converged=False``; the metric history is kept either way.

    Args:
        mu0: Initial vorticity.
        t_end: Final time.
        grid: Evaluation grid.
        mesh: Time mesh for the Duhamel integral (default 8 graded nodes).
        tol: Relative L^1 tolerance.
        max_iter: Maximum number of iterates, the linear one included.
        snapshots: Output times (default ``t_end`` only).
        cfg: Kernel discretization.
        q: Exponent of ``N_j``.
        p: Exponent of ``L_j``.
        workers: Threads evaluating distinct times of a sweep.
    """
    check_time(t_end)
    if not tol > 0:
        raise InvalidParameterError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise InvalidParameterError(f"max_iter must be >= 1, got {max_iter}")
    mesh = mesh or TimeMesh.graded(t_end, 8)
    snaps = np.asarray(snapshots if snapshots is not None else [t_end], dtype=np.float64)
    if np.any(snaps <= 0) or np.any(snaps > mesh.t_end * (1 + 1e-12)):
        raise InvalidConfigError(
            "Snapshot times must lie in (0, t_end]",
            errors=[f"time.snapshots: {snaps.tolist()}"],
        )
    times = _path_times(mesh, snaps)
    snap_idx = [int(np.flatnonzero(np.isclose(times, s, rtol=1e-12, atol=0.0))[0]) for s in snaps]

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        linear = list(pool.map(lambda s: apply_T_composite(mu0, float(s), grid, cfg), times))
        omegas = list(linear)
        path = VorticityPath(times, tuple(omegas), _velocities(omegas, grid, pool))
        metrics = IterationMetrics(q=q, p=p)
        metrics.extend(iteration_metrics(path, q, p))
        iterations = 1
        converged = all(lq_norm(w, 1.0) == 0.0 for w in linear)
        if converged:
            logger.info("Initial data vanish; the linear iterate is exact")

        while not converged and iterations < max_iter:
            sweep = partial(duhamel_term, path, mesh=mesh, grid=grid, cfg=cfg)
            duhamel = list(pool.map(sweep, times))
            new = [base + d for base, d in zip(linear, duhamel, strict=True)]
            diff = max(_relative_l1(new[k], omegas[k]) for k in snap_idx)
            omegas = new
            path = VorticityPath(times, tuple(omegas), _velocities(omegas, grid, pool))
            iterations += 1
            metrics.diff_norms.append(diff)
            metrics.extend(iteration_metrics(path, q, p))
            ratio = metrics.contraction_ratios[-1] if len(metrics.diff_norms) > 1 else float("nan")
            logger.info("Picard sweep %d: relative L1 change %.3e, contraction %.3f", iterations, diff, ratio)
            converged = diff < tol

    if not converged:
        logger.warning("Picard iteration stopped after %d sweeps without reaching tol=%g", iterations, tol)
    return MildSolution(
        times=snaps,
        omega=[path.omega[k] for k in snap_idx],
        velocity=[path.velocity[k] for k in snap_idx],
        metrics=metrics,
        converged=converged,
        iterations=iterations,
        path=path,
    )


def mild_residual(
    solution: MildSolution,
    mu0: VorticityMeasure,
    mesh: TimeMesh,
    grid: HalfPlaneGrid,
    cfg: KernelConfig = DEFAULT_CONFIG,
) -> float:
    """Sup over snapshots of the relative L^1 residual of the integral equation."""
    if solution.path is None:
        raise InvalidParameterError("Solution carries no path to evaluate the residual on")
    worst = 0.0
    for t, w in zip(solution.times, solution.omega, strict=True):
        rhs = apply_T_composite(mu0, float(t), grid, cfg) + duhamel_term(solution.path, float(t), mesh, grid, cfg)
        worst = max(worst, _relative_l1(w, rhs))
    return worst


# ---------------------------------------------------------------------------
# Finite-difference oracle for the linear problem
# ---------------------------------------------------------------------------


def fd_oracle_linear(
    omega0: ScalarField,
    t_end: float,
    *,
    dt: float | None = None,
    pad_factor: int = DEFAULT_PAD,
) -> ScalarField:
    """Explicit 5-point heat stepping with the nonlocal boundary law ``d2 omega = A omega``.

    The boundary row uses a ghost row ``omega_{-1} = omega_1 - 2 h2 A_h omega_0``
    where ``A_h`` is the generator of the discrete harmonic extension, which
    keeps the scheme non-expansive. The top row and the side columns are held
    at zero.

    Raises:
        InvalidConfigError: If ``dt`` exceeds ``min(h1, h2)^2 / 4``.
    """
    check_time(t_end)
    grid = omega0.grid
    h1, h2 = grid.h1, grid.h2
    limit = min(h1, h2) ** 2 / 4
    if dt is None:
        dt = 0.8 * limit
    if dt > limit:
        raise InvalidConfigError(
            f"Explicit step dt={dt:g} violates the stability bound {limit:g}",
            errors=[f"dt must be <= min(h1, h2)^2 / 4 = {limit:g}"],
        )
    steps = max(1, math.ceil(t_end / dt))
    dt = t_end / steps
    symbol = lambda xi: discrete_A_symbol(xi, h1, h2)  # noqa: E731
    w = omega0.values.copy()
    w[-1] = 0.0
    w[:, [0, -1]] = 0.0
    logger.debug("FD oracle: %d steps of dt=%.3e on a %dx%d grid", steps, dt, grid.n1, grid.n2)
    for _ in range(steps):
        a_trace = apply_multiplier(omega0.trace().with_values(w[0]), symbol, pad_factor=pad_factor).values
        lap = np.zeros_like(w)
        lap[1:-1, 1:-1] = (w[1:-1, 2:] - 2 * w[1:-1, 1:-1] + w[1:-1, :-2]) / h1**2 + (
            w[2:, 1:-1] - 2 * w[1:-1, 1:-1] + w[:-2, 1:-1]
        ) / h2**2
        ghost = w[1] - 2 * h2 * a_trace
        lap[0, 1:-1] = (w[0, 2:] - 2 * w[0, 1:-1] + w[0, :-2]) / h1**2 + (
            w[1, 1:-1] - 2 * w[0, 1:-1] + ghost[1:-1]
        ) / h2**2
        w = w + dt * lap
    return ScalarField(grid, w)

