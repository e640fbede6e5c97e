"""Custom exceptions for halfplane-vorticity."""

from __future__ import annotations

from functools import wraps
from typing import Any, Callable, ParamSpec, TypeVar

import typer

P = ParamSpec("P")
R = TypeVar("R")


class HalfPlaneError(Exception):
    """Base exception for halfplane-vorticity errors."""

    exit_code: int = 1
    hint: str | None = None

    def __init__(self, message: str, hint: str | None = None) -> None:
        super().__init__(message)
        self.message = message
        if hint:
            self.hint = hint


class InvalidParameterError(HalfPlaneError, ValueError):
    """A numerical argument lies outside its admissible range."""

    pass


class InvalidTimeError(InvalidParameterError):
    """Time argument is not positive (or negative where zero is allowed)."""

    def __init__(self, t: float, *, allow_zero: bool = False) -> None:
        self.t = t
        bound = "t >= 0" if allow_zero else "t > 0"
        super().__init__(f"Invalid time t={t!r}: requires {bound}")


class SingularityError(InvalidParameterError):
    """Kernel evaluated at (or within eps of) its singular point."""

    def __init__(self, message: str, distance: float | None = None) -> None:
        self.distance = distance
        super().__init__(
            message,
            hint="Exclude the singular cell explicitly or evaluate off the source point.",
        )


class ResolutionError(InvalidParameterError):
    """Discretization too coarse for the requested operation."""

    def __init__(self, n: int, minimum: int) -> None:
        self.n = n
        self.minimum = minimum
        super().__init__(
            f"Line has {n} samples, at least {minimum} are required",
            hint="Refine the boundary line or enlarge the grid.",
        )


class OutOfDomainError(InvalidParameterError):
    """Point lies outside the truncated computational domain."""

    def __init__(self, point: tuple[float, float]) -> None:
        self.point = point
        super().__init__(
            f"Point ({point[0]:g}, {point[1]:g}) lies outside the grid",
            hint="Enlarge the grid extents (grid.L1 / grid.L2) to cover the measure support.",
        )


class CorruptFieldError(HalfPlaneError, ValueError):
    """Sampled field contains NaN or infinite values."""

    def __init__(self, what: str = "field") -> None:
        super().__init__(f"Non-finite values found in {what}")


class ConfigurationError(HalfPlaneError):
    """Error related to run configuration."""

    exit_code = 2


class InvalidConfigError(ConfigurationError):
    """Run configuration failed validation."""

    def __init__(self, message: str, errors: list[str] | None = None) -> None:
        self.errors = errors or []
        super().__init__(
            message,
            hint="Fix the listed keys; unknown keys are rejected to catch typos.",
        )


class UnknownScenarioError(ConfigurationError):
    """Scenario name is not registered."""

    def __init__(self, name: str, available: list[str]) -> None:
        self.name = name
        super().__init__(
            f"Unknown scenario '{name}'",
            hint=f"Available scenarios: {', '.join(available)}",
        )


class UnknownSuiteError(ConfigurationError):
    """Verification suite name is not registered."""

    def __init__(self, name: str, available: list[str]) -> None:
        self.name = name
        super().__init__(
            f"Unknown verification suite '{name}'",
            hint=f"Available suites: {', '.join(available)}",
        )


class NonConvergenceError(HalfPlaneError):
    """Picard iteration did not reach the tolerance within max_iter sweeps."""

    exit_code = 3

    def __init__(self, iterations: int, last_diff: float, history: Any = None) -> None:
        self.iterations = iterations
        self.last_diff = last_diff
        self.history = history
        super().__init__(
            f"Picard iteration did not converge after {iterations} sweeps "
            f"(last relative difference {last_diff:.3e})",
            hint="Reduce the circulation, shorten t_end or raise solver.max_iter.",
        )


def handle_errors(debug: bool = False) -> Callable[[Callable[P, R]], Callable[P, R]]:
    """Decorator to handle exceptions and display user-friendly errors."""

    def decorator(func: Callable[P, R]) -> Callable[P, R]:
        @wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
            try:
                return func(*args, **kwargs)
            except HalfPlaneError as e:
                typer.secho(f"Error: {e.message}", fg=typer.colors.RED, err=True)
                if e.hint:
                    typer.secho(f"Hint: {e.hint}", fg=typer.colors.YELLOW, err=True)
                if debug:
                    raise
                raise typer.Exit(e.exit_code) from None
            except KeyboardInterrupt:
                typer.echo("\nInterrupted", err=True)
                raise typer.Exit(130) from None
            except typer.Exit:
                raise
            except Exception as e:
                typer.secho(f"Unexpected error: {e}", fg=typer.colors.RED, err=True)
                if debug:
                    raise
                typer.secho(
                    "Run with --debug for full traceback",
                    fg=typer.colors.YELLOW,
                    err=True,
                )
                raise typer.Exit(1) from None

        return wrapper

    return decorator
