"""CLI command modules."""

from __future__ import annotations

from dataclasses import dataclass

import typer

from halfplane_vorticity.output import OutputFormat


@dataclass(frozen=True)
class CLIState:
    """Global options set by the app callback and read by every command."""

    debug: bool = False
    format: OutputFormat = OutputFormat.TABLE
    verbosity: int = 0

    @property
    def verbose(self) -> bool:
        return self.verbosity >= 1


def cli_state(ctx: typer.Context | None) -> CLIState:
    """State stored on ``ctx``, or the defaults when a command runs on its own."""
    if ctx is not None and isinstance(ctx.obj, CLIState):
        return ctx.obj
    return CLIState()
