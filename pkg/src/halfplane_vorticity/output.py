"""Console reporting for hpvort commands."""

from __future__ import annotations

import json
import math
import os
from enum import Enum
from typing import TYPE_CHECKING, Any

from rich.console import Console
from rich.table import Table

if TYPE_CHECKING:
    from collections.abc import Sequence


class OutputFormat(str, Enum):
    """Output format options."""

    JSON = "json"
    TABLE = "table"
    PLAIN = "plain"


def format_number(value: Any) -> str:
    """Render numbers compactly; everything else through ``str``."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if math.isnan(value) or math.isinf(value):
        return str(value)
    return f"{value:.6g}"


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class OutputFormatter:
    """Formats run summaries and verification reports."""

    def __init__(self, console: Console | None = None) -> None:
        self.console = console or Console()
        self._no_color = os.getenv("NO_COLOR") is not None

    def _render(self, table: Table) -> str:
        with self.console.capture() as capture:
            self.console.print(table)
        return capture.get()

    def format_dict(self, data: dict[str, Any], fmt: OutputFormat) -> str:
        """Format a key/value summary."""
        if fmt == OutputFormat.JSON:
            return json.dumps(_jsonable(data), indent=2, sort_keys=True, default=str)
        if fmt == OutputFormat.TABLE:
            table = Table(show_header=True)
            table.add_column("Key", style="cyan")
            table.add_column("Value")
            for key, value in data.items():
                table.add_row(str(key), format_number(value))
            return self._render(table)
        return "\n".join(f"{key}: {format_number(value)}" for key, value in data.items())

    def format_list(
        self,
        data: Sequence[dict[str, Any]],
        fmt: OutputFormat,
        headers: list[str] | None = None,
    ) -> str:
        """Format rows of a report."""
        if not data:
            return "[]" if fmt == OutputFormat.JSON else "No results"
        if fmt == OutputFormat.JSON:
            return json.dumps(_jsonable(list(data)), indent=2, default=str)

        headers = headers or list(data[0].keys())
        if fmt == OutputFormat.TABLE:
            table = Table(show_header=True)
            for header in headers:
                table.add_column(header.replace("_", " ").title(), style="cyan")
            for row in data:
                cells = [format_number(row.get(h, "")) for h in headers]
                if "passed" in row and not self._no_color:
                    mark = "[green]PASS[/green]" if row["passed"] else "[red]FAIL[/red]"
                    cells = [mark if h == "passed" else c for h, c in zip(headers, cells, strict=True)]
                table.add_row(*cells)
            return self._render(table)
        return "\n".join(
            " | ".join(f"{h}: {format_number(row.get(h, ''))}" for h in headers) for row in data
        )

    def print_dict(self, data: dict[str, Any], fmt: OutputFormat) -> None:
        """Print a formatted summary."""
        self.console.print(self.format_dict(data, fmt), highlight=False, soft_wrap=True)

    def print_list(
        self,
        data: Sequence[dict[str, Any]],
        fmt: OutputFormat,
        headers: list[str] | None = None,
    ) -> None:
        """Print a formatted report."""
        self.console.print(self.format_list(data, fmt, headers), highlight=False, soft_wrap=True)

    def success(self, message: str) -> None:
        """Print a success message."""
        if self._no_color:
            self.console.print(f"OK: {message}")
        else:
            self.console.print(f"[green]OK:[/green] {message}")


formatter = OutputFormatter()
