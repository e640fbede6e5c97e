"""Run configuration loading and validation for halfplane-vorticity."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import yaml

from halfplane_vorticity.exceptions import InvalidConfigError
from halfplane_vorticity.grid_core import HalfPlaneGrid
from halfplane_vorticity.vorticity_semigroup import KernelConfig

THREADS_ENV = "HPVORT_THREADS"

SCENARIOS = (
    "point_vortex",
    "vortex_pair",
    "vortex_sheet",
    "smooth_blob",
    "trace_zero_dipole",
    "stokes_only",
)
OUTPUT_FORMATS = ("csv", "gnuplot")

_NUMBER = (int, float)

# Accepted keys per block and the types their values may take.
SCHEMA: dict[str, dict[str, tuple[type, ...]]] = {
    "grid": {"L1": _NUMBER, "L2": _NUMBER, "n1": (int,), "n2": (int,)},
    "time": {"t_end": _NUMBER, "snapshots": (int,), "duhamel_nodes": (int,)},
    "initial": {
        "atoms": (list,),
        "sheet": (dict,),
        "density": (dict,),
        "amplitude": _NUMBER,
    },
    "solver": {"tol": _NUMBER, "max_iter": (int,), "q": _NUMBER, "p": _NUMBER},
    "kernel": {"z2_nodes": (int,), "pad_factor": (int,), "tail_extent": _NUMBER},
    "output": {"directory": (str,), "formats": (list,)},
}
TOP_LEVEL = ("scenario", *SCHEMA)

ATOM_KEYS = {"x1", "x2", "kappa"}
SHEET_KEYS = {"x1_min", "x1_max", "x2", "density", "samples"}
DENSITY_KEYS = {"x1", "x2", "width", "amplitude"}


@dataclass(frozen=True)
class GridConfig:
    L1: float = 8.0
    L2: float = 8.0
    n1: int = 256
    n2: int = 128

    def to_grid(self) -> HalfPlaneGrid:
        return HalfPlaneGrid.symmetric(self.L1, self.L2, self.n1, self.n2)


@dataclass(frozen=True)
class TimeConfig:
    t_end: float = 0.5
    snapshots: int = 4
    duhamel_nodes: int = 8


@dataclass(frozen=True)
class InitialConfig:
    """Scenario parameters; each scenario reads the parts it needs."""

    atoms: tuple[tuple[float, float, float], ...] = ()
    sheet: dict[str, float] = field(default_factory=dict)
    density: dict[str, float] = field(default_factory=dict)
    amplitude: float | None = None

    def params(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        if self.atoms:
            out["atoms"] = [list(a) for a in self.atoms]
        if self.sheet:
            out["sheet"] = dict(self.sheet)
        if self.density:
            out["density"] = dict(self.density)
        if self.amplitude is not None:
            out["amplitude"] = self.amplitude
        return out


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-6
    max_iter: int = 20
    q: float = 4.0 / 3.0
    p: float = 4.0


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "hpvort-output"
    formats: tuple[str, ...] = ("csv",)


@dataclass(frozen=True)
class RunConfig:
    """A complete, validated run description."""

    scenario: str
    grid: GridConfig = field(default_factory=GridConfig)
    time: TimeConfig = field(default_factory=TimeConfig)
    initial: InitialConfig = field(default_factory=InitialConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    kernel: KernelConfig = field(default_factory=KernelConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["initial"] = self.initial.params()
        data["output"]["formats"] = list(self.output.formats)
        return data

    def digest(self) -> str:
        """sha256 of the canonical JSON form (sorted keys)."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


def _is_type(value: Any, types: tuple[type, ...]) -> bool:
    # bool is an int subclass but never a valid count or number here
    return isinstance(value, types) and not isinstance(value, bool)


def _check_point_list(atoms: list[Any], errors: list[str]) -> None:
    for k, atom in enumerate(atoms):
        if not isinstance(atom, dict) or set(atom) != ATOM_KEYS:
            errors.append(f"initial.atoms[{k}]: expected keys {sorted(ATOM_KEYS)}")
            continue
        if not all(_is_type(atom[key], _NUMBER) for key in ATOM_KEYS):
            errors.append(f"initial.atoms[{k}]: values must be numbers")
        elif atom["x2"] < 0:
            errors.append(f"initial.atoms[{k}]: x2 must be >= 0")


def _check_sub_block(block: dict[str, Any], allowed: set[str], where: str, errors: list[str]) -> None:
    for key, value in block.items():
        if key not in allowed:
            errors.append(f"{where}: unknown key '{key}'")
        elif not _is_type(value, _NUMBER):
            errors.append(f"{where}.{key}: must be a number")


def validate_run_config(data: Any) -> list[str]:
    """Validate a parsed configuration and return every problem found.

    Args:
        data: Object produced by ``yaml.safe_load``.

    Returns:
        List of validation error messages. Empty if valid.
    """
    errors: list[str] = []
    if not isinstance(data, dict):
        return ["configuration must be a mapping of blocks"]

    for key in data:
        if key not in TOP_LEVEL:
            errors.append(f"unknown top-level key '{key}'")

    scenario = data.get("scenario")
    if scenario is None:
        errors.append("missing 'scenario'")
    elif scenario not in SCENARIOS:
        errors.append(f"scenario: '{scenario}' is not one of {', '.join(SCENARIOS)}")

    for block_name, spec in SCHEMA.items():
        block = data.get(block_name, {})
        if block is None:
            block = {}
        if not isinstance(block, dict):
            errors.append(f"{block_name}: must be a mapping")
            continue
        for key, value in block.items():
            if key not in spec:
                errors.append(f"{block_name}: unknown key '{key}'")
            elif not _is_type(value, spec[key]):
                names = "/".join(t.__name__ for t in spec[key])
                errors.append(f"{block_name}.{key}: expected {names}, got {type(value).__name__}")

    grid = data.get("grid") or {}
    if isinstance(grid, dict):
        for key in ("L1", "L2", "n1", "n2"):
            value = grid.get(key)
            if _is_type(value, _NUMBER) and value <= 0:
                errors.append(f"grid.{key}: must be positive")
        for key in ("n1", "n2"):
            value = grid.get(key)
            if _is_type(value, (int,)) and 0 < value < 16:
                errors.append(f"grid.{key}: at least 16 nodes are required")

    time = data.get("time") or {}
    if isinstance(time, dict):
        if _is_type(time.get("t_end"), _NUMBER) and time["t_end"] <= 0:
            errors.append("time.t_end: must be positive")
        if _is_type(time.get("snapshots"), (int,)) and time["snapshots"] <= 0:
            errors.append("time.snapshots: must be positive")
        if _is_type(time.get("duhamel_nodes"), (int,)) and time["duhamel_nodes"] < 2:
            errors.append("time.duhamel_nodes: at least 2 nodes are required")

    solver = data.get("solver") or {}
    if isinstance(solver, dict):
        if _is_type(solver.get("tol"), _NUMBER) and solver["tol"] <= 0:
            errors.append("solver.tol: must be positive")
        if _is_type(solver.get("max_iter"), (int,)) and solver["max_iter"] <= 0:
            errors.append("solver.max_iter: must be positive")
        if _is_type(solver.get("q"), _NUMBER) and not 1 < solver["q"] < 2:
            errors.append("solver.q: must lie in (1, 2)")
        if _is_type(solver.get("p"), _NUMBER) and not solver["p"] > 2:
            errors.append("solver.p: must exceed 2")

    kernel = data.get("kernel") or {}
    if isinstance(kernel, dict):
        if _is_type(kernel.get("z2_nodes"), (int,)) and kernel["z2_nodes"] < 16:
            errors.append("kernel.z2_nodes: must be >= 16")
        if _is_type(kernel.get("pad_factor"), (int,)) and kernel["pad_factor"] < 4:
            errors.append("kernel.pad_factor: must be >= 4")
        if _is_type(kernel.get("tail_extent"), _NUMBER) and kernel["tail_extent"] <= 0:
            errors.append("kernel.tail_extent: must be positive")

    initial = data.get("initial") or {}
    if isinstance(initial, dict):
        if isinstance(initial.get("atoms"), list):
            _check_point_list(initial["atoms"], errors)
        if isinstance(initial.get("sheet"), dict):
            _check_sub_block(initial["sheet"], SHEET_KEYS, "initial.sheet", errors)
        if isinstance(initial.get("density"), dict):
            _check_sub_block(initial["density"], DENSITY_KEYS, "initial.density", errors)

    output = data.get("output") or {}
    if isinstance(output, dict) and isinstance(output.get("formats"), list):
        for fmt in output["formats"]:
            if fmt not in OUTPUT_FORMATS:
                errors.append(f"output.formats: '{fmt}' is not one of {', '.join(OUTPUT_FORMATS)}")

    return errors


def build_run_config(data: dict[str, Any]) -> RunConfig:
    """Build a :class:`RunConfig` from data that passed validation."""

    def block(name: str) -> dict[str, Any]:
        return dict(data.get(name) or {})

    initial = block("initial")
    atoms = tuple((float(a["x1"]), float(a["x2"]), float(a["kappa"])) for a in initial.get("atoms", []))
    output = block("output")
    if "formats" in output:
        output["formats"] = tuple(output["formats"])
    return RunConfig(
        scenario=str(data["scenario"]),
        grid=GridConfig(**block("grid")),
        time=TimeConfig(**block("time")),
        initial=InitialConfig(
            atoms=atoms,
            sheet={k: float(v) for k, v in initial.get("sheet", {}).items()},
            density={k: float(v) for k, v in initial.get("density", {}).items()},
            amplitude=None if initial.get("amplitude") is None else float(initial["amplitude"]),
        ),
        solver=SolverConfig(**block("solver")),
        kernel=KernelConfig(**block("kernel")),
        output=OutputConfig(**output),
    )


class ConfigManager:
    """Loads run configuration files."""

    def __init__(self, config_path: Path) -> None:
        """Initialize the configuration manager.

        Args:
            config_path: Path to the YAML run configuration.
        """
        self.config_path = config_path

    def _load_config(self) -> Any:
        """Load the configuration file."""
        if not self.config_path.exists():
            raise InvalidConfigError(
                f"Configuration file not found: {self.config_path}",
                errors=[f"{self.config_path}: no such file"],
            )
        try:
            with open(self.config_path) as f:
                return yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise InvalidConfigError(
                f"Configuration file is not valid YAML: {self.config_path}",
                errors=[str(e)],
            ) from e

    def validate_config(self) -> list[str]:
        """Validate the configuration file and return list of errors."""
        return validate_run_config(self._load_config())

    def load(self) -> RunConfig:
        """Load and validate the run configuration.

        Raises:
            InvalidConfigError: If the file is missing, unparsable or invalid.
        """
        data = self._load_config()
        errors = validate_run_config(data)
        if errors:
            raise InvalidConfigError(
                f"Invalid configuration {self.config_path}: {len(errors)} problem(s)\n  "
                + "\n  ".join(errors),
                errors=errors,
            )
        return build_run_config(data)


def load_run_config(path: Path | str) -> RunConfig:
    """Load, validate and build a run configuration from ``path``."""
    return ConfigManager(Path(path)).load()


def thread_count() -> int:
    """Worker threads for snapshot-parallel evaluation, from ``HPVORT_THREADS``.

    Raises:
        InvalidConfigError: If the variable is set to anything but a positive integer.
    """
    raw = os.getenv(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return 1
    try:
        value = int(raw)
    except ValueError as e:
        raise InvalidConfigError(
            f"{THREADS_ENV} must be a positive integer, got {raw!r}",
            errors=[f"{THREADS_ENV}={raw}"],
        ) from e
    if value < 1:
        raise InvalidConfigError(
            f"{THREADS_ENV} must be a positive integer, got {raw!r}",
            errors=[f"{THREADS_ENV}={raw}"],
        )
    return value
