"""
Atomic file output: write to a temporary sibling, then rename over the target.
"""
import json
import os
import tempfile
from pathlib import Path
from typing import Any

from src.core.exceptions import IoError, SchemaViolation


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    """
    Write data to path so readers never observe a partial file.

    Raises:
        IoError: If the directory is missing or not writable
    """
    target = Path(path)
    try:
        fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent or ".")
    except OSError as exc:
        raise IoError(f"Cannot write {target}: {exc.strerror or exc}") from exc
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, target)
    except OSError as exc:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise IoError(f"Cannot write {target}: {exc.strerror or exc}") from exc


def atomic_write_text(path: str | Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def dump_json(payload: Any) -> str:
    """Indented JSON; floats use the shortest repr that round-trips exactly."""
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def read_text(path: str | Path) -> str:
    """
    Raises:
        IoError: If the file cannot be read
        SchemaViolation: If the file is not UTF-8 text
    """
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise SchemaViolation(f"{path} is not UTF-8 text (byte {exc.start})") from exc
    except OSError as exc:
        raise IoError(f"Cannot read {path}: {exc.strerror or exc}") from exc
