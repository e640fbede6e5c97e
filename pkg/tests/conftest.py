"""Shared pytest fixtures for halfplane-vorticity tests."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest
import yaml
from typer.testing import CliRunner

from halfplane_vorticity.grid_core import HalfPlaneGrid, VorticityMeasure
from halfplane_vorticity.vorticity_semigroup import KernelConfig


@pytest.fixture
def cli_runner() -> CliRunner:
    """Typer CLI runner for testing commands."""
    return CliRunner()


@pytest.fixture
def small_grid() -> HalfPlaneGrid:
    """64 x 32 nodes on [-8, 8] x [0, 8]."""
    return HalfPlaneGrid.symmetric(8.0, 8.0, 64, 32)


@pytest.fixture
def medium_grid() -> HalfPlaneGrid:
    """128 x 64 nodes on [-8, 8] x [0, 8]."""
    return HalfPlaneGrid.symmetric(8.0, 8.0, 128, 64)


@pytest.fixture
def kernel_config() -> KernelConfig:
    """Default kernel discretization."""
    return KernelConfig()


@pytest.fixture
def unit_atom() -> VorticityMeasure:
    """Unit point vortex at (0, 1)."""
    return VorticityMeasure.point_vortex(1.0, (0.0, 1.0))


@pytest.fixture
def run_config_data(tmp_path: Path) -> dict[str, Any]:
    """A small valid run configuration."""
    return {
        "scenario": "stokes_only",
        "grid": {"L1": 8.0, "L2": 8.0, "n1": 64, "n2": 32},
        "time": {"t_end": 0.25, "snapshots": 2, "duhamel_nodes": 4},
        "initial": {"atoms": [{"x1": 0.0, "x2": 1.0, "kappa": 1.0}]},
        "solver": {"tol": 1e-6, "max_iter": 10},
        "output": {"directory": str(tmp_path / "out"), "formats": ["csv"]},
    }


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[Any, str], Path]:
    """Write a configuration mapping (or raw text) to a YAML file."""

    def _write(data: Any, name: str = "run.yaml") -> Path:
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else yaml.safe_dump(data))
        return path

    return _write
