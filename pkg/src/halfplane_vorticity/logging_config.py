"""Logging configuration for halfplane-vorticity."""

from __future__ import annotations

import logging
import os
import re
import sys

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "halfplane_vorticity"

VERBOSITY_LEVELS = {-1: logging.ERROR, 0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}
PLAIN_FORMAT = "%(levelname)s: %(message)s"
DETAILED_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class PrecisionFilter(logging.Filter):
    """Shorten long floating point literals in log messages."""

    FLOAT = re.compile(r"-?\d+\.\d{7,}(?:e[-+]?\d+)?")

    def filter(self, record: logging.LogRecord) -> bool:
        """Round floats in the formatted message to 6 significant digits."""
        try:
            message = record.getMessage()
        except (TypeError, ValueError):
            return True
        record.msg = self.FLOAT.sub(lambda m: f"{float(m.group(0)):.6g}", message)
        record.args = None
        return True


def _console_handler(verbosity: int, no_color: bool) -> logging.Handler:
    if not no_color and sys.stderr.isatty():
        return RichHandler(
            console=Console(stderr=True),
            show_time=verbosity >= 2,
            show_path=verbosity >= 2,
            rich_tracebacks=True,
            tracebacks_show_locals=verbosity >= 2,
        )
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(DETAILED_FORMAT if verbosity >= 2 else PLAIN_FORMAT))
    return handler


def setup_logging(
    verbosity: int = 0,
    log_file: str | None = None,
    no_color: bool | None = None,
) -> logging.Logger:
    """Configure logging for the CLI.

    Library modules log through children of the package logger, so handlers
    (not the logger) carry the precision filter. Python warnings, such as
    numpy overflow or scipy quadrature warnings, are routed into the log.

    Args:
        verbosity: Verbosity level (-1=quiet, 0=normal, 1=verbose, 2=debug).
        log_file: Optional path to log file; it always receives DEBUG records.
        no_color: Disable colors. If None, checks NO_COLOR env var.

    Returns:
        Configured package logger.
    """
    if no_color is None:
        no_color = os.getenv("NO_COLOR") is not None
    level = VERBOSITY_LEVELS[max(-1, min(verbosity, 2))]

    handlers = [_console_handler(verbosity, no_color)]
    handlers[0].setLevel(level)
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(DETAILED_FORMAT))
        handlers.append(file_handler)

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG if log_file else level)
    logger.handlers.clear()
    logger.propagate = False

    warnings_logger = logging.getLogger("py.warnings")
    warnings_logger.handlers.clear()
    warnings_logger.propagate = False
    logging.captureWarnings(True)

    for handler in handlers:
        handler.addFilter(PrecisionFilter())
        logger.addHandler(handler)
        warnings_logger.addHandler(handler)

    return logger


def get_logger(name: str | None = None) -> logging.Logger:
    """Get the package logger, or one of its children."""
    if name is None or name == LOGGER_NAME:
        return logging.getLogger(LOGGER_NAME)
    if name.startswith(LOGGER_NAME + "."):
        return logging.getLogger(name)
    return logging.getLogger(f"{LOGGER_NAME}.{name}")
