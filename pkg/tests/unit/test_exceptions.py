"""Tests for custom exceptions."""

from __future__ import annotations

import pytest
import typer

from halfplane_vorticity.exceptions import (
    ConfigurationError,
    CorruptFieldError,
    HalfPlaneError,
    InvalidConfigError,
    InvalidParameterError,
    InvalidTimeError,
    NonConvergenceError,
    OutOfDomainError,
    ResolutionError,
    SingularityError,
    UnknownScenarioError,
    UnknownSuiteError,
    handle_errors,
)


class TestExceptions:
    """Tests for custom exception classes."""

    def test_base_exception(self) -> None:
        """Test base HalfPlaneError."""
        error = HalfPlaneError("Test error", hint="Test hint")

        assert error.message == "Test error"
        assert error.hint == "Test hint"
        assert error.exit_code == 1
        assert str(error) == "Test error"

    def test_numerical_errors_are_value_errors(self) -> None:
        """Test numerical argument errors can be caught as ValueError."""
        for error in (
            InvalidParameterError("bad"),
            InvalidTimeError(-1.0),
            SingularityError("at source"),
            ResolutionError(8, 16),
            OutOfDomainError((20.0, 1.0)),
            CorruptFieldError(),
        ):
            assert isinstance(error, ValueError)

    def test_invalid_time_error(self) -> None:
        """Test InvalidTimeError."""
        error = InvalidTimeError(0.0)

        assert error.t == 0.0
        assert "t > 0" in error.message
        assert "t >= 0" in InvalidTimeError(-1.0, allow_zero=True).message

    def test_resolution_error(self) -> None:
        """Test ResolutionError."""
        error = ResolutionError(8, 16)

        assert error.n == 8
        assert error.minimum == 16
        assert error.hint is not None

    def test_out_of_domain_error(self) -> None:
        """Test OutOfDomainError."""
        error = OutOfDomainError((20.0, 1.0))

        assert "20" in error.message
        assert "grid" in error.hint

    def test_configuration_errors_exit_2(self) -> None:
        """Test configuration errors exit with status 2."""
        assert InvalidConfigError("bad").exit_code == 2
        assert UnknownScenarioError("nope", ["a"]).exit_code == 2
        assert UnknownSuiteError("nope", ["a"]).exit_code == 2
        assert isinstance(InvalidConfigError("bad"), ConfigurationError)

    def test_invalid_config_error_keeps_errors(self) -> None:
        """Test InvalidConfigError."""
        error = InvalidConfigError("Invalid", errors=["grid.n1: must be >= 16"])

        assert error.errors == ["grid.n1: must be >= 16"]

    def test_unknown_scenario_lists_available(self) -> None:
        """Test UnknownScenarioError."""
        error = UnknownScenarioError("vortex", ["point_vortex", "vortex_pair"])

        assert error.name == "vortex"
        assert "point_vortex" in error.hint

    def test_non_convergence_error(self) -> None:
        """Test NonConvergenceError."""
        error = NonConvergenceError(20, 1.5e-3, history={"diff_norms": [1.0]})

        assert error.exit_code == 3
        assert error.iterations == 20
        assert error.history == {"diff_norms": [1.0]}
        assert "20" in error.message


class TestHandleErrors:
    """Tests for the handle_errors decorator."""

    def test_passes_return_value(self) -> None:
        """Test successful calls are unaffected."""

        @handle_errors()
        def ok() -> int:
            return 42

        assert ok() == 42

    def test_maps_exit_code(self) -> None:
        """Test library errors become typer exits with their code."""

        @handle_errors()
        def fail() -> None:
            raise NonConvergenceError(3, 0.1)

        with pytest.raises(typer.Exit) as exc_info:
            fail()
        assert exc_info.value.exit_code == 3

    def test_unexpected_error_exit_1(self) -> None:
        """Test unexpected exceptions exit with status 1."""

        @handle_errors()
        def fail() -> None:
            raise RuntimeError("boom")

        with pytest.raises(typer.Exit) as exc_info:
            fail()
        assert exc_info.value.exit_code == 1

    def test_debug_reraises(self) -> None:
        """Test debug mode re-raises the original exception."""

        @handle_errors(debug=True)
        def fail() -> None:
            raise InvalidConfigError("bad")

        with pytest.raises(InvalidConfigError):
            fail()

    def test_keyboard_interrupt(self) -> None:
        """Test interrupts exit with status 130."""

        @handle_errors()
        def interrupted() -> None:
            raise KeyboardInterrupt

        with pytest.raises(typer.Exit) as exc_info:
            interrupted()
        assert exc_info.value.exit_code == 130
