"""EMB1 sentence-embedding files.

Byte layout: magic ``EMB1``, little-endian uint32 row count n and dimension
d, then n*d little-endian IEEE-754 float32 values in row-major order.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import InputError

MAGIC = b"EMB1"
_HEADER = struct.Struct("<4sII")


def write_emb1(path: str, values: np.ndarray) -> None:
    values = np.asarray(values, dtype=np.float32)
    if values.ndim != 2:
        raise InputError(f"embedding matrix must be 2-d, got shape {values.shape}")
    if not np.isfinite(values).all():
        raise InputError("embedding matrix contains non-finite values")
    n, d = values.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, n, d))
        fh.write(np.ascontiguousarray(values, dtype="<f4").tobytes())


def read_emb1(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise InputError(f"{path}: shorter than the EMB1 header")
    magic, n, d = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise InputError(f"{path}: bad magic {magic!r}")
    payload = blob[_HEADER.size :]
    if len(payload) != 4 * n * d:
        raise InputError(f"{path}: payload size {len(payload)} != {4 * n * d}")
    return np.frombuffer(payload, dtype="<f4").reshape(n, d).copy()
