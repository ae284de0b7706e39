"""Output plumbing: atomic file writes and fixed-precision float formatting."""

from __future__ import annotations

import os
import tempfile


def fmt17(value: float) -> str:
    """Format with 17 significant digits (lossless for binary64)."""
    return format(float(value), ".17g")


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temporary file in the same directory, then rename over."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
