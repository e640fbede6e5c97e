"""Evolve command: run a configured scenario and write its artifacts."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import typer

from halfplane_vorticity.artifacts import ArtifactWriter
from halfplane_vorticity.biot_savart import velocity_from_measure
from halfplane_vorticity.commands import cli_state
from halfplane_vorticity.config_manager import RunConfig, load_run_config, thread_count
from halfplane_vorticity.exceptions import NonConvergenceError, handle_errors
from halfplane_vorticity.grid_core import (
    HalfPlaneGrid,
    ScalarField,
    TimeMesh,
    VectorField,
    VorticityMeasure,
    integrate_field,
    lq_norm,
)
from halfplane_vorticity.logging_config import get_logger
from halfplane_vorticity.navier_stokes import mild_residual, picard_solve, snapshot_times
from halfplane_vorticity.output import OutputFormat, formatter
from halfplane_vorticity.scenarios import builtin_initial, registry
from halfplane_vorticity.vorticity_semigroup import apply_T_kernel


@dataclass
class RunResult:
    """Outcome of one scenario run."""

    scenario: str
    solver: str
    times: list[float]
    converged: bool
    iterations: int
    directory: Path
    metrics: dict[str, Any] = field(default_factory=dict)
    artifacts: list[Path] = field(default_factory=list)

    def summary(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "scenario": self.scenario,
            "solver": self.solver,
            "snapshots": len(self.times),
            "t_end": self.times[-1],
            "converged": self.converged,
            "iterations": self.iterations,
            "artifacts": len(self.artifacts),
            "directory": str(self.directory),
        }
        if "residual" in self.metrics:
            data["residual"] = self.metrics["residual"]
        return data


def _field_norms(fields: list[ScalarField]) -> dict[str, list[float]]:
    return {
        "mass": [integrate_field(w) for w in fields],
        "l1": [lq_norm(w, 1.0) for w in fields],
        "linf": [lq_norm(w, math.inf) for w in fields],
    }


def _stokes(
    cfg: RunConfig, mu0: VorticityMeasure, grid: HalfPlaneGrid, times: list[float], workers: int
) -> tuple[list[ScalarField], list[VectorField], dict[str, Any]]:
    with ThreadPoolExecutor(max_workers=workers) as pool:
        omegas = list(pool.map(lambda t: apply_T_kernel(mu0, t, grid, cfg.kernel), times))
        velocities = list(pool.map(lambda w: velocity_from_measure(VorticityMeasure.from_density(w)), omegas))
    metrics: dict[str, Any] = {"solver": "stokes", **_field_norms(omegas)}
    return omegas, velocities, metrics


def run_scenario(cfg: RunConfig, *, output_dir: Path | None = None, workers: int = 1) -> RunResult:
    """Run ``cfg`` and write snapshots, metadata and metrics.

    ``stokes_only`` evaluates ``T(t) mu0`` at each snapshot; every other
    scenario goes through the Picard iteration.

    Raises:
        NonConvergenceError: After the artifacts are written, if Picard
            stopped at ``max_iter`` above tolerance.
    """
    logger = get_logger()
    grid = cfg.grid.to_grid()
    info = registry.get_info(cfg.scenario)
    mu0 = builtin_initial(cfg.scenario, cfg.initial.params(), grid)
    times = [float(t) for t in snapshot_times(cfg.time.t_end, cfg.time.snapshots)]
    directory = output_dir or Path(cfg.output.directory)
    logger.info(
        "Running %s on a %dx%d grid to t=%g with %d worker(s)",
        cfg.scenario,
        grid.n1,
        grid.n2,
        cfg.time.t_end,
        workers,
    )

    if info.solver == "stokes":
        omegas, velocities, metrics = _stokes(cfg, mu0, grid, times, workers)
        converged, iterations = True, 0
    else:
        mesh = TimeMesh.graded(cfg.time.t_end, cfg.time.duhamel_nodes)
        solution = picard_solve(
            mu0,
            cfg.time.t_end,
            grid,
            mesh,
            cfg.solver.tol,
            cfg.solver.max_iter,
            snapshots=times,
            cfg=cfg.kernel,
            q=cfg.solver.q,
            p=cfg.solver.p,
            workers=workers,
        )
        omegas, velocities = solution.omega, solution.velocity
        converged, iterations = solution.converged, solution.iterations
        metrics = {
            "solver": "picard",
            **solution.metrics.to_dict(),
            **_field_norms(omegas),
            "residual": mild_residual(solution, mu0, mesh, grid, cfg.kernel),
        }

    writer = ArtifactWriter(directory, cfg.output.formats)
    for k, (omega, velocity) in enumerate(zip(omegas, velocities, strict=True)):
        writer.snapshot(k, omega, velocity)
    constants: dict[str, Any] = {"converged": converged, "iterations": iterations}
    if metrics["solver"] == "picard":
        constants["N_sup"] = max(metrics["N"])
        constants["L_sup"] = max(metrics["L"])
        constants["residual"] = metrics["residual"]
    writer.metadata(grid, times, cfg.digest(), cfg.scenario, constants)
    writer.metrics(metrics)
    logger.info("Wrote %d artifact(s) to %s", len(writer.written), directory)

    result = RunResult(
        scenario=cfg.scenario,
        solver=metrics["solver"],
        times=times,
        converged=converged,
        iterations=iterations,
        directory=directory,
        metrics=metrics,
        artifacts=list(writer.written),
    )
    if not converged:
        diffs = metrics.get("diff_norms") or [math.inf]
        raise NonConvergenceError(iterations, diffs[-1], history=metrics)
    return result


def evolve(
    config: Path = typer.Argument(..., help="YAML run configuration."),
    output: Optional[Path] = typer.Option(
        None,
        "--output",
        "-o",
        help="Artifact directory (overrides output.directory).",
    ),
    ctx: typer.Context = typer.Option(None),
) -> None:
    """Evolve a scenario and write snapshot fields and metrics.

    Example:
        hpvort evolve point_vortex.yaml
        hpvort evolve dipole.yaml --output runs/dipole
    """
    state = cli_state(ctx)
    debug, fmt = state.debug, state.format

    @handle_errors(debug)
    def _run() -> None:
        cfg = load_run_config(config)
        result = run_scenario(cfg, output_dir=output, workers=thread_count())
        formatter.print_dict(result.summary(), fmt)
        if fmt != OutputFormat.JSON:
            formatter.success(f"Wrote {len(result.artifacts)} artifact(s) to {result.directory}")

    _run()
