"""File-system helpers for viscogp artifacts.

Covers:
- Output directory resolution (argument, environment, config)
- File-type validation for datasets, models and configs
- Atomic writes (write to a temporary sibling, then rename)
"""

import logging
import os
import tempfile
from pathlib import Path
from typing import Optional, Set, Union

from viscogp.core.errors import ViscoGPError

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "VISCOGP_OUTPUT_DIR"

ALLOWED_DATASETS = {".csv"}
ALLOWED_MODELS = {".json"}
ALLOWED_CONFIGS = {".yaml", ".yml", ".json"}


class PathValidationError(ViscoGPError, ValueError):
    """Raised when path validation fails."""
    pass


def validate_file_type(path: Path, allowed: Set[str], category: str = "file") -> Path:
    """Validate file extension.

    Args:
        path: Path to validate.
        allowed: Set of allowed extensions (with leading dot).
        category: Category name for error messages.

    Returns:
        The validated path.

    Raises:
        PathValidationError: If extension not allowed.
    """
    ext = Path(path).suffix.lower()
    if ext not in allowed:
        raise PathValidationError(
            f"Invalid {category} type: '{ext}'. "
            f"Allowed: {', '.join(sorted(allowed))}"
        )
    return Path(path)


def resolve_output_dir(
    explicit: Optional[Union[str, Path]] = None,
    configured: Optional[Union[str, Path]] = None,
) -> Path:
    """Pick the output directory for a run.

    Precedence is the explicit argument, then ``VISCOGP_OUTPUT_DIR``, then the
    configured value, then ``./results``.
    """
    if explicit is not None:
        return Path(explicit)
    env_value = os.environ.get(OUTPUT_DIR_ENV)
    if env_value:
        return Path(env_value)
    if configured is not None:
        return Path(configured)
    return Path("results")


def atomic_write_text(path: Path, text: str) -> Path:
    """Write text so readers never observe a partially written file.

    Args:
        path: Destination file.
        text: File contents.

    Returns:
        The destination path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.debug(f"Wrote {path}")
    return path
