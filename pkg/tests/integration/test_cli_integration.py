"""End-to-end tests running hpvort commands on small grids."""

from __future__ import annotations

import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np
import pytest
from typer.testing import CliRunner

from halfplane_vorticity.artifacts import FIELD_HEADER
from halfplane_vorticity.cli import app

WriteConfig = Callable[..., Path]


class TestEvolveWorkflow:
    """Tests for hpvort evolve."""

    def test_stokes_only_run(
        self, cli_runner: CliRunner, run_config_data: dict[str, Any], write_config: WriteConfig
    ) -> None:
        """Test a linear run writes snapshots, metadata and metrics."""
        config = write_config(run_config_data)
        out = Path(run_config_data["output"]["directory"])

        result = cli_runner.invoke(app, ["evolve", str(config)])

        assert result.exit_code == 0, result.output
        assert sorted(p.name for p in out.iterdir()) == [
            "metadata.json",
            "metrics.json",
            "snapshot_0.csv",
            "snapshot_1.csv",
        ]
        assert (out / "snapshot_0.csv").read_text().splitlines()[0] == FIELD_HEADER
        metadata = json.loads((out / "metadata.json").read_text())
        assert metadata["scenario"] == "stokes_only"
        assert metadata["times"] == [0.125, 0.25]
        assert len(metadata["config_hash"]) == 64

    def test_stokes_only_spreads(
        self, cli_runner: CliRunner, run_config_data: dict[str, Any], write_config: WriteConfig
    ) -> None:
        """Test the peak vorticity decays between snapshots."""
        config = write_config(run_config_data)
        out = Path(run_config_data["output"]["directory"])

        cli_runner.invoke(app, ["evolve", str(config)])

        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["solver"] == "stokes"
        assert metrics["linf"][1] < metrics["linf"][0]

    def test_output_override(
        self,
        cli_runner: CliRunner,
        run_config_data: dict[str, Any],
        write_config: WriteConfig,
        tmp_path: Path,
    ) -> None:
        """Test --output replaces output.directory."""
        config = write_config(run_config_data)

        result = cli_runner.invoke(app, ["evolve", str(config), "--output", str(tmp_path / "elsewhere")])

        assert result.exit_code == 0, result.output
        assert (tmp_path / "elsewhere" / "metrics.json").exists()
        assert not Path(run_config_data["output"]["directory"]).exists()

    def test_deterministic(
        self, cli_runner: CliRunner, run_config_data: dict[str, Any], write_config: WriteConfig, tmp_path: Path
    ) -> None:
        """Test repeated runs give byte-identical snapshots."""
        config = write_config(run_config_data)

        for name in ("a", "b"):
            cli_runner.invoke(app, ["evolve", str(config), "-o", str(tmp_path / name)])

        for name in ("snapshot_0.csv", "snapshot_1.csv", "metadata.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_malformed_config(
        self, cli_runner: CliRunner, run_config_data: dict[str, Any], write_config: WriteConfig
    ) -> None:
        """Test a bad config exits with status 2 and writes nothing."""
        run_config_data["grid"]["n1"] = "many"
        run_config_data["solver"]["tolerance"] = 1e-6
        config = write_config(run_config_data)

        result = cli_runner.invoke(app, ["evolve", str(config)])

        assert result.exit_code == 2
        assert "grid.n1" in result.output
        assert "tolerance" in result.output
        assert not Path(run_config_data["output"]["directory"]).exists()

    def test_unparsable_yaml(self, cli_runner: CliRunner, write_config: WriteConfig) -> None:
        """Test invalid YAML exits with status 2."""
        config = write_config("scenario: [unclosed\n")

        result = cli_runner.invoke(app, ["evolve", str(config)])

        assert result.exit_code == 2
        assert "not valid YAML" in result.output

    def test_missing_config(self, cli_runner: CliRunner, tmp_path: Path) -> None:
        """Test a missing file exits with status 2."""
        result = cli_runner.invoke(app, ["evolve", str(tmp_path / "absent.yaml")])

        assert result.exit_code == 2

    def test_bad_thread_count(
        self,
        cli_runner: CliRunner,
        run_config_data: dict[str, Any],
        write_config: WriteConfig,
        monkeypatch: pytest.MonkeyPatch,
    ) -> None:
        """Test a malformed HPVORT_THREADS is a configuration error."""
        monkeypatch.setenv("HPVORT_THREADS", "lots")
        config = write_config(run_config_data)

        result = cli_runner.invoke(app, ["evolve", str(config)])

        assert result.exit_code == 2

    @pytest.mark.slow
    def test_non_convergence(
        self, cli_runner: CliRunner, run_config_data: dict[str, Any], write_config: WriteConfig
    ) -> None:
        """Test hitting max_iter exits with status 3 after writing metrics."""
        run_config_data["scenario"] = "point_vortex"
        run_config_data["initial"] = {"amplitude": 0.5}
        run_config_data["solver"]["max_iter"] = 1
        config = write_config(run_config_data)
        out = Path(run_config_data["output"]["directory"])

        result = cli_runner.invoke(app, ["evolve", str(config)])

        assert result.exit_code == 3
        assert "did not converge" in result.output
        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["solver"] == "picard"
        assert "diff_norms" in metrics
        assert (out / "snapshot_1.csv").exists()


class TestKernelDumpWorkflow:
    """Tests for hpvort kernel-dump."""

    def test_stdout(self, cli_runner: CliRunner) -> None:
        """Test W is written to stdout as CSV."""
        result = cli_runner.invoke(app, ["kernel-dump", "--kernel", "W", "--t", "0.25", "--y", "0,1", "--n1", "16", "--n2", "8"])

        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert lines[0] == "x1,x2,value"
        assert len(lines) == 1 + 16 * 8

    def test_boundary_source_gives_zero(self, cli_runner: CliRunner, tmp_path: Path) -> None:
        """Test W~ of a source on the boundary is zero everywhere."""
        target = tmp_path / "wtilde.csv"

        result = cli_runner.invoke(
            app,
            ["kernel-dump", "-k", "Wtilde", "--t", "0.5", "--y", "0,0", "--n1", "16", "--n2", "8", "-o", str(target)],
        )

        assert result.exit_code == 0, result.output
        table = np.loadtxt(target, delimiter=",", skiprows=1)
        np.testing.assert_array_equal(table[:, 2], 0.0)


class TestVerifyWorkflow:
    """Tests for hpvort verify."""

    def test_kernels_json(self, cli_runner: CliRunner) -> None:
        """Test the kernels suite passes and reports as JSON."""
        result = cli_runner.invoke(app, ["--format", "json", "verify", "kernels", "--n1", "32", "--n2", "16"])

        assert result.exit_code == 0, result.output
        report = json.loads(result.stdout)
        assert len(report) == 8
        assert all(entry["passed"] for entry in report)
