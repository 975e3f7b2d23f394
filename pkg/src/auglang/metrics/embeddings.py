"""EMB1 embedding files and token log-probability records.

EMB1 is a bit-exact binary layout: magic bytes ``EMB1``, two little-endian
uint32 (row count n, dimension d), then n*d little-endian IEEE-754 float32
values in row-major order. Logprob files are JSONL, one object per sentence
with a ``logprobs`` array of natural-log token probabilities.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass

import numpy as np

from ..errors import EmbeddingFormatError

EMB1_MAGIC = b"EMB1"
_HEADER = struct.Struct("<4sII")


@dataclass
class EmbeddingMatrix:
    values: np.ndarray  # (n, d) float32

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float32)
        if arr.ndim != 2:
            raise EmbeddingFormatError(f"embedding matrix must be 2-d, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise EmbeddingFormatError("embedding matrix contains non-finite values")
        self.values = arr

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


def write_emb1(path: str, values) -> None:
    matrix = values if isinstance(values, EmbeddingMatrix) else EmbeddingMatrix(values)
    n, d = matrix.values.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(EMB1_MAGIC, n, d))
        fh.write(np.ascontiguousarray(matrix.values, dtype="<f4").tobytes())


def read_emb1(path: str) -> EmbeddingMatrix:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except FileNotFoundError:
        raise EmbeddingFormatError(f"embedding file not found: {path}")
    if len(blob) < _HEADER.size:
        raise EmbeddingFormatError(f"{path}: shorter than the EMB1 header")
    magic, n, d = _HEADER.unpack_from(blob)
    if magic != EMB1_MAGIC:
        raise EmbeddingFormatError(f"{path}: bad magic {magic!r}, expected {EMB1_MAGIC!r}")
    payload = blob[_HEADER.size :]
    expected = 4 * n * d
    if len(payload) != expected:
        raise EmbeddingFormatError(
            f"{path}: payload holds {len(payload)} bytes, header promises {expected}"
        )
    values = np.frombuffer(payload, dtype="<f4").reshape(n, d)
    return EmbeddingMatrix(values.copy())


def write_logprobs(path: str, records) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps({"logprobs": [float(v) for v in rec]}) + "\n")


def read_logprobs(path: str) -> list[list[float]]:
    try:
        fh = open(path, encoding="utf-8")
    except FileNotFoundError:
        raise EmbeddingFormatError(f"logprob file not found: {path}")
    records: list[list[float]] = []
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise EmbeddingFormatError(f"{path}:{lineno}: invalid JSON ({exc})")
            if not isinstance(obj, dict) or "logprobs" not in obj:
                raise EmbeddingFormatError(f"{path}:{lineno}: missing 'logprobs' field")
            records.append([float(v) for v in obj["logprobs"]])
    return records
