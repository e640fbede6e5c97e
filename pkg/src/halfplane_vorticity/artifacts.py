"""Flat-file result writers.

Every writer is deterministic: fixed column order, ``%.17g`` floats and
JSON with sorted keys, so identical runs give byte-identical files.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any, TextIO

import numpy as np

from halfplane_vorticity import __version__

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from halfplane_vorticity.grid_core import HalfPlaneGrid, ScalarField, VectorField

    FloatArray = NDArray[np.float64]

logger = logging.getLogger(__name__)

FLOAT_FMT = "%.17g"
FIELD_HEADER = "x1,x2,omega,u1,u2"


def _json_value(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return [_json_value(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if np.isfinite(v) else str(v)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, dict):
        return {str(k): _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def write_json(path: Path, data: dict[str, Any]) -> Path:
    """Write ``data`` as indented JSON with sorted keys."""
    path.write_text(json.dumps(_json_value(data), indent=2, sort_keys=True) + "\n")
    return path


def grid_metadata(grid: HalfPlaneGrid) -> dict[str, Any]:
    return {
        "x1_min": grid.x1_min,
        "x1_max": grid.x1_max,
        "x2_max": grid.x2_max,
        "n1": grid.n1,
        "n2": grid.n2,
        "h1": grid.h1,
        "h2": grid.h2,
    }


def write_field_csv(path: Path, omega: ScalarField, velocity: VectorField) -> Path:
    """One row per node, ``x1`` varying fastest."""
    X1, X2 = omega.grid.mesh()
    table = np.column_stack(
        [a.ravel() for a in (X1, X2, omega.values, velocity.u1, velocity.u2)]
    )
    np.savetxt(path, table, fmt=FLOAT_FMT, delimiter=",", header=FIELD_HEADER, comments="")
    return path


def write_gnuplot_matrix(path: Path, field: ScalarField) -> Path:
    """Gnuplot ``nonuniform matrix`` layout: first row ``n1, x1...``, then ``x2, values...``."""
    grid = field.grid
    first = np.concatenate([[grid.n1], grid.x1])
    body = np.column_stack([grid.x2, field.values])
    np.savetxt(path, np.vstack([first, body]), fmt=FLOAT_FMT, delimiter=" ")
    return path


def write_kernel_csv(
    target: Path | TextIO,
    grid: HalfPlaneGrid,
    values: FloatArray,
    columns: tuple[str, ...] = ("value",),
) -> None:
    """Gridded kernel slice with header ``x1,x2,<columns>``.

    ``values`` has shape ``grid.shape`` followed by any trailing component
    axes, flattened in C order into ``len(columns)`` columns.
    """
    X1, X2 = grid.mesh()
    flat = np.asarray(values).reshape(X1.size, len(columns))
    table = np.column_stack([X1.ravel(), X2.ravel(), flat])
    header = ",".join(("x1", "x2", *columns))
    np.savetxt(target, table, fmt=FLOAT_FMT, delimiter=",", header=header, comments="")


class ArtifactWriter:
    """Writes the artifact set of one run into ``directory``."""

    def __init__(self, directory: Path, formats: tuple[str, ...] = ("csv",)) -> None:
        self.directory = directory
        self.formats = formats
        self.written: list[Path] = []

    def _target(self, name: str) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.directory / name
        self.written.append(path)
        return path

    def snapshot(self, k: int, omega: ScalarField, velocity: VectorField) -> None:
        """Write snapshot ``k`` in every requested format."""
        if "csv" in self.formats:
            write_field_csv(self._target(f"snapshot_{k}.csv"), omega, velocity)
        if "gnuplot" in self.formats:
            write_gnuplot_matrix(self._target(f"snapshot_{k}.gnuplot.dat"), omega)
        logger.debug("Wrote snapshot %d to %s", k, self.directory)

    def metadata(
        self,
        grid: HalfPlaneGrid,
        times: FloatArray,
        config_hash: str,
        scenario: str,
        constants: dict[str, Any] | None = None,
    ) -> None:
        write_json(
            self._target("metadata.json"),
            {
                "version": __version__,
                "scenario": scenario,
                "grid": grid_metadata(grid),
                "times": np.asarray(times),
                "config_hash": config_hash,
                "constants": constants or {},
            },
        )

    def metrics(self, data: dict[str, Any]) -> None:
        write_json(self._target("metrics.json"), data)
