"""Verify command for running the invariant suites."""

from __future__ import annotations

from typing import Optional

import typer
from rich.console import Console

from halfplane_vorticity.commands import cli_state
from halfplane_vorticity.exceptions import handle_errors
from halfplane_vorticity.grid_core import HalfPlaneGrid
from halfplane_vorticity.output import OutputFormat, formatter
from halfplane_vorticity.verification import CheckResult, list_suites, run_suite

console = Console()

REPORT_HEADERS = ["suite", "name", "value", "tolerance", "passed"]


def verify(
    suite: str = typer.Argument(..., help=f"Suite to run: {', '.join(list_suites())}."),
    n1: Optional[int] = typer.Option(None, "--n1", help="Grid nodes in x1 (default 256)."),
    n2: Optional[int] = typer.Option(None, "--n2", help="Grid nodes in x2 (default 128)."),
    extent: Optional[float] = typer.Option(
        None,
        "--extent",
        help="Half-width and height of the grid (default 8).",
    ),
    ctx: typer.Context = typer.Option(None),
) -> None:
    """Run an invariant suite and report every check.

    Exits with status 1 if any check fails.

    Example:
        hpvort verify kernels
        hpvort verify all --n1 128 --n2 64
    """
    state = cli_state(ctx)
    debug, fmt = state.debug, state.format

    @handle_errors(debug)
    def _run() -> list[CheckResult]:
        grid = None
        if n1 is not None or n2 is not None or extent is not None:
            default = HalfPlaneGrid.default()
            size = extent if extent is not None else default.x1_max
            grid = HalfPlaneGrid.symmetric(size, size, n1 or default.n1, n2 or default.n2)
        return run_suite(suite, grid)

    results = _run()
    formatter.print_list([r.to_dict() for r in results], fmt, headers=REPORT_HEADERS)
    if state.verbose:
        for r in results:
            if r.details:
                console.print(f"  [dim]{r.suite} / {r.name}: {r.details}[/dim]")

    failed = sum(1 for r in results if not r.passed)
    if fmt != OutputFormat.JSON:
        console.print()
        if failed:
            console.print(f"[red]{failed} of {len(results)} checks failed[/red]")
        else:
            console.print(f"[green]All {len(results)} checks passed[/green]")
    raise typer.Exit(1 if failed else 0)
