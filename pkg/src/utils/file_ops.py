"""
File operation utilities for report output.
"""

import os
import tempfile
from pathlib import Path
from typing import Optional

from src.utils.logger import get_logger

logger = get_logger(__name__)


class Result:
    """
    Standard result object for file operations.

    Provides consistent success/error reporting.
    """

    def __init__(self, success: bool, data=None, error: Optional[str] = None):
        """
        Initialize result.

        Args:
            success: Whether operation succeeded
            data: Optional data payload
            error: Optional error message
        """
        self.success = success
        self.data = data
        self.error = error

    def __bool__(self) -> bool:
        """Return True if operation succeeded."""
        return self.success

    @staticmethod
    def ok(data=None) -> "Result":
        """Create successful result."""
        return Result(True, data, None)

    @staticmethod
    def fail(error: str) -> "Result":
        """Create failed result."""
        return Result(False, None, error)


def write_text_atomic(path: Path, text: str) -> Result:
    """
    Write text through a temporary file in the target directory, then rename.

    Line endings are written as-is (LF), independent of the platform.

    Args:
        path: Destination file
        text: Content

    Returns:
        Result with the destination path
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp_name, path)
        except Exception:
            Path(tmp_name).unlink(missing_ok=True)
            raise
        logger.info(f"Wrote {path}")
        return Result.ok(path)
    except Exception as e:
        logger.error(f"Failed to write {path}: {e}")
        return Result.fail(str(e))


def read_text(path: Path) -> Result:
    """Read a UTF-8 text file into a Result."""
    try:
        return Result.ok(Path(path).read_text(encoding="utf-8"))
    except Exception as e:
        logger.error(f"Failed to read {path}: {e}")
        return Result.fail(str(e))
