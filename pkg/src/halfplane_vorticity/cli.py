"""Main CLI entry point for hpvort."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console

from halfplane_vorticity import __version__
from halfplane_vorticity.commands import CLIState
from halfplane_vorticity.logging_config import setup_logging
from halfplane_vorticity.output import OutputFormat

app = typer.Typer(
    name="hpvort",
    help="Vorticity semigroup and mild Navier-Stokes solutions on the half plane.",
    no_args_is_help=True,
    rich_markup_mode="rich",
    pretty_exceptions_show_locals=False,
)

console = Console()


def version_callback(value: bool) -> None:
    """Show version and exit."""
    if value:
        console.print(f"hpvort {__version__}")
        raise typer.Exit()


def resolve_verbosity(verbose: int, quiet: bool, debug: bool) -> int:
    """-1 when quiet, 2 under --debug, otherwise the -v count."""
    if quiet:
        return -1
    return 2 if debug else verbose


@app.callback()
def main(
    ctx: typer.Context,
    version: bool = typer.Option(
        False, "--version", "-V", callback=version_callback, is_eager=True, help="Show version and exit."
    ),
    verbose: int = typer.Option(
        0, "--verbose", "-v", count=True, help="Log Picard sweeps (-v) or kernel tables (-vv)."
    ),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Only show errors."),
    debug: bool = typer.Option(False, "--debug", help="Full tracebacks and debug logging."),
    log_file: Optional[Path] = typer.Option(
        None, "--log-file", dir_okay=False, help="Also write debug-level logs to this file."
    ),
    format: OutputFormat = typer.Option(
        OutputFormat.TABLE, "--format", "-f", help="Format of reports and run summaries."
    ),
) -> None:
    """hpvort - evolve vorticity on the half plane and check the operators behind it.

    [bold]evolve[/bold] runs a YAML scenario, [bold]verify[/bold] runs an invariant
    suite, [bold]kernel-dump[/bold] writes a gridded kernel slice.
    """
    verbosity = resolve_verbosity(verbose, quiet, debug)
    setup_logging(
        verbosity=verbosity,
        log_file=str(log_file) if log_file else None,
        no_color=os.getenv("NO_COLOR") is not None,
    )
    ctx.obj = CLIState(debug=debug, format=format, verbosity=verbosity)


from halfplane_vorticity.commands import evolve as evolve_cmd  # noqa: E402
from halfplane_vorticity.commands import kernel_dump as kernel_dump_cmd  # noqa: E402
from halfplane_vorticity.commands import verify as verify_cmd  # noqa: E402

app.command(name="evolve", rich_help_panel="Run")(evolve_cmd.evolve)
app.command(name="verify", rich_help_panel="Check")(verify_cmd.verify)
app.command(name="kernel-dump", rich_help_panel="Inspect")(kernel_dump_cmd.kernel_dump)


if __name__ == "__main__":
    app()
