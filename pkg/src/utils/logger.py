"""
Logging configuration for horoball24.

Records are stamped with the running subcommand so that interleaved log
files from sweeps and verification runs stay attributable.
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

from src.config.constants import (
    DEFAULT_LOG_LEVEL,
    LOG_BACKUP_COUNT,
    LOG_DIR,
    LOG_FILE_NAME,
    LOG_FORMAT,
    LOG_MAX_BYTES,
)

NO_RUN = "-"


class RunContextFilter(logging.Filter):
    """Sets record.run to the current subcommand."""

    def __init__(self, run: str = NO_RUN):
        super().__init__()
        self.run = run

    def filter(self, record: logging.LogRecord) -> bool:
        record.run = self.run
        return True


def setup_logging(
    log_dir: Path = LOG_DIR,
    log_level: str = DEFAULT_LOG_LEVEL,
    log_to_file: bool = False,
    log_to_console: bool = True,
    run: str = NO_RUN,
) -> None:
    """
    Set up logging configuration.

    Console output goes to stderr; stdout is reserved for reports.

    Args:
        log_dir: Directory for the rotating log file
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_to_file: Whether to log to file
        log_to_console: Whether to log to console
        run: Subcommand stamped on every record
    """
    level = getattr(logging, log_level.upper(), logging.WARNING)
    context = RunContextFilter(run)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)
        if isinstance(handler, RotatingFileHandler):
            handler.close()

    handlers = []
    if log_to_file:
        log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            log_dir / LOG_FILE_NAME,
            maxBytes=LOG_MAX_BYTES,
            backupCount=LOG_BACKUP_COUNT,
            encoding="utf-8",
        )
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handlers.append(file_handler)

    if log_to_console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(
            Horoball24Formatter(LOG_FORMAT, use_colors=sys.stderr.isatty())
        )
        handlers.append(console_handler)

    for handler in handlers:
        handler.setLevel(level)
        handler.addFilter(context)
        root_logger.addHandler(handler)


def get_logger(name: str) -> logging.Logger:
    """Module logger; use get_logger(__name__)."""
    return logging.getLogger(name)


class Horoball24Formatter(logging.Formatter):
    """
    Console formatter with color coding by log level.
    """

    COLORS = {
        logging.DEBUG: "\033[36m",  # Cyan
        logging.INFO: "\033[32m",  # Green
        logging.WARNING: "\033[33m",  # Yellow
        logging.ERROR: "\033[31m",  # Red
        logging.CRITICAL: "\033[35m",  # Magenta
    }
    RESET = "\033[0m"

    def __init__(self, fmt: Optional[str] = None, use_colors: bool = True):
        super().__init__(fmt)
        self.use_colors = use_colors

    def format(self, record: logging.LogRecord) -> str:
        if not hasattr(record, "run"):
            record.run = NO_RUN
        text = super().format(record)
        if self.use_colors and record.levelno in self.COLORS:
            return f"{self.COLORS[record.levelno]}{text}{self.RESET}"
        return text
