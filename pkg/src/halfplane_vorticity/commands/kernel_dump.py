"""Kernel-dump command: gridded slices of W, W~ and the Green matrix."""

from __future__ import annotations

import sys
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np
import typer

from halfplane_vorticity.artifacts import write_kernel_csv
from halfplane_vorticity.commands import cli_state
from halfplane_vorticity.exceptions import InvalidParameterError, handle_errors
from halfplane_vorticity.grid_core import HalfPlaneGrid
from halfplane_vorticity.logging_config import get_logger
from halfplane_vorticity.vorticity_semigroup import (
    DEFAULT_CONFIG,
    green_matrix,
    kernel_W,
    kernel_W_tilde,
)

GREEN_COLUMNS = ("G11", "G12", "G21", "G22")


class KernelName(str, Enum):
    """Kernels available for dumping."""

    W = "W"
    WTILDE = "Wtilde"
    G = "G"


def parse_point(text: str) -> tuple[float, float]:
    """Parse ``"y1,y2"`` into a point of the closed upper half plane."""
    parts = text.split(",")
    try:
        y1, y2 = (float(p) for p in parts)
    except ValueError as e:
        raise InvalidParameterError(
            f"Expected a point 'y1,y2', got {text!r}",
            hint="Pass the source point as two comma-separated numbers, e.g. --y 0,1",
        ) from e
    if y2 < 0:
        raise InvalidParameterError(f"Source point must satisfy y2 >= 0, got {y2:g}")
    return y1, y2


def kernel_slice(kernel: KernelName, grid: HalfPlaneGrid, y: tuple[float, float], t: float) -> np.ndarray:
    """Kernel values at every node of ``grid`` for the source ``y``.

    Scalar kernels give shape ``grid.shape``; ``G`` gives ``(*grid.shape, 2, 2)``.
    """
    X1, X2 = grid.mesh()
    x = np.stack([X1, X2], axis=-1)
    source = np.asarray(y, dtype=np.float64)
    if kernel is KernelName.W:
        return np.asarray(kernel_W(x, source, t, DEFAULT_CONFIG))
    if kernel is KernelName.WTILDE:
        return np.asarray(kernel_W_tilde(x, source, t, DEFAULT_CONFIG))
    return green_matrix(x, source, t, DEFAULT_CONFIG)


def kernel_dump(
    kernel: KernelName = typer.Option(..., "--kernel", "-k", help="Kernel to evaluate."),
    t: float = typer.Option(..., "--t", help="Time t > 0."),
    y: str = typer.Option(..., "--y", help="Source point as 'y1,y2'."),
    n1: int = typer.Option(128, "--n1", help="Grid nodes in x1."),
    n2: int = typer.Option(64, "--n2", help="Grid nodes in x2."),
    extent: float = typer.Option(4.0, "--extent", help="Half-width and height of the grid."),
    output: Optional[Path] = typer.Option(
        None,
        "--output",
        "-o",
        help="CSV file to write (default stdout).",
    ),
    ctx: typer.Context = typer.Option(None),
) -> None:
    """Emit a gridded kernel slice x -> K(x, y, t) as CSV.

    Example:
        hpvort kernel-dump --kernel W --t 0.25 --y 0,1
        hpvort kernel-dump --kernel G --t 1 --y 0.5,2 -o green.csv
    """
    debug = cli_state(ctx).debug

    @handle_errors(debug)
    def _run() -> None:
        logger = get_logger()
        source = parse_point(y)
        grid = HalfPlaneGrid.symmetric(extent, extent, n1, n2)
        logger.info("Evaluating %s at y=(%g, %g), t=%g on %dx%d nodes", kernel.value, *source, t, n1, n2)
        values = kernel_slice(kernel, grid, source, t)
        columns = GREEN_COLUMNS if kernel is KernelName.G else ("value",)
        if output is None:
            write_kernel_csv(sys.stdout, grid, values, columns)
        else:
            write_kernel_csv(output, grid, values, columns)
            logger.info("Wrote %s", output)

    _run()
