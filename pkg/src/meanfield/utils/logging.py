"""Logging configuration for meanfield.

Records go to stderr so tables and artifact paths printed on stdout stay
machine-readable.
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional, Tuple

from pythonjsonlogger import jsonlogger

from .constants import APP_NAME, LOG_BACKUP_COUNT, LOG_FILE_NAME, LOG_MAX_BYTES

_TEXT_FILE_FORMAT = "%(asctime)s %(processName)s %(name)s %(levelname)s: %(message)s"
_JSON_FORMAT = "%(asctime)s %(processName)s %(name)s %(levelname)s %(message)s"


def _formatters(log_format: str) -> Tuple[logging.Formatter, logging.Formatter]:
    """Return (console, file) formatters for ``text`` or ``json`` output."""
    if log_format == "json":
        structured = jsonlogger.JsonFormatter(_JSON_FORMAT)
        return structured, structured
    return (
        logging.Formatter(fmt="%(levelname)s: %(message)s"),
        logging.Formatter(fmt=_TEXT_FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"),
    )


def setup_logging(
    log_level: str = "INFO",
    log_dir: Optional[Path] = None,
    log_to_console: bool = True,
    verbose: bool = False,
    log_format: str = "text",
) -> None:
    """
    Configure the application logger.

    Calling it again replaces the handlers, so the CLI can add a log file
    once the run config is known.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_dir: Directory for the rotating log file (no file logging if None)
        log_to_console: Whether to log to stderr
        verbose: Force DEBUG level
        log_format: "text" or "json"
    """
    level = logging.DEBUG if verbose else getattr(logging, log_level.upper(), logging.INFO)
    console_formatter, file_formatter = _formatters(log_format)

    logger = logging.getLogger(APP_NAME)
    logger.setLevel(level)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    if log_to_console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        console_handler.setFormatter(console_formatter)
        logger.addHandler(console_handler)

    if log_dir is not None:
        try:
            log_dir.mkdir(parents=True, exist_ok=True)
            file_handler = RotatingFileHandler(
                log_dir / LOG_FILE_NAME,
                maxBytes=LOG_MAX_BYTES,
                backupCount=LOG_BACKUP_COUNT,
                encoding="utf-8",
            )
        except OSError as e:
            logger.warning(f"Could not create log file in {log_dir}: {e}")
        else:
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(file_formatter)
            logger.addHandler(file_handler)

    logger.propagate = False


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Get a child of the application logger.

    Args:
        name: Logger name, usually ``__name__`` or a class name

    Returns:
        logging.Logger: Logger instance
    """
    if name:
        return logging.getLogger(f"{APP_NAME}.{name}")
    return logging.getLogger(APP_NAME)


class LoggerMixin:
    """Mixin class to add logging capability to any class."""

    @property
    def logger(self) -> logging.Logger:
        """Logger named after the concrete class."""
        return get_logger(self.__class__.__name__)
