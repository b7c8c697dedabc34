"""Atomic file writing shared by the library and the CLI."""

import os
import tempfile

__all__ = ["atomic_write_text"]


def atomic_write_text(path, text):
    """Write text to path via a temp file in the same directory + rename,
    so concurrent writers to distinct paths never interleave and a crashed
    write never leaves a partial file."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".kvred-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
