"""Versioned on-disk format for built indexes (pickle behind a small header)."""

from __future__ import annotations

import pickle
from pathlib import Path

from .errors import PSPError

MAGIC = b"PSPIDX"
FORMAT_VERSION = 1


class FormatError(PSPError, ValueError):
    pass


def dumps(obj) -> bytes:
    return MAGIC + FORMAT_VERSION.to_bytes(2, "big") + pickle.dumps(obj, protocol=4)


def loads(data: bytes):
    if not data.startswith(MAGIC):
        raise FormatError("not an index file")
    version = int.from_bytes(data[len(MAGIC):len(MAGIC) + 2], "big")
    if version != FORMAT_VERSION:
        raise FormatError(f"index format version {version}, expected {FORMAT_VERSION}")
    return pickle.loads(data[len(MAGIC) + 2:])


def save_index(idx, path: str | Path) -> int:
    data = dumps(idx)
    Path(path).write_bytes(data)
    return len(data)


def load_index(path: str | Path):
    return loads(Path(path).read_bytes())


def index_bytes(idx) -> int:
    return len(pickle.dumps(idx, protocol=4))
