"""Dense per-concept vector table with text and binary serialization.

Text format: header line "n d seed", then one line per concept with the
concept id followed by d decimal floats at 9 significant digits (the
text form is stable under a save/load/save round trip).  Binary format:
magic "KFEM1", little-endian header (n, d, seed), length-prefixed UTF-8
names, then the raw float64 matrix; this form is lossless and byte
deterministic.
"""

from __future__ import annotations

import struct
from typing import BinaryIO, Iterable, TextIO

import numpy as np

from .errors import ConceptNotFoundError, ConfigError

BINARY_MAGIC = b"KFEM1"
_HEADER = struct.Struct("<QQq")
_NAME_LEN = struct.Struct("<I")


class EmbeddingModel:
    """Immutable mapping from concept id to a float64 vector."""

    def __init__(self, names: Iterable[str], matrix: np.ndarray, seed: int):
        self.names = tuple(names)
        matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != len(self.names):
            raise ConfigError(
                f"matrix shape {matrix.shape} does not match {len(self.names)} names")
        self.matrix = matrix
        self.seed = int(seed)
        self.index = {name: i for i, name in enumerate(self.names)}
        self._unit: np.ndarray | None = None
        self.epoch_losses: tuple[float, ...] = ()

    @property
    def dimension(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, concept_id: str) -> bool:
        return concept_id in self.index

    def vector(self, concept_id: str) -> np.ndarray:
        try:
            return self.matrix[self.index[concept_id]]
        except KeyError:
            raise ConceptNotFoundError([concept_id]) from None

    def unit_matrix(self) -> np.ndarray:
        """Row-normalized copy, cached; zero rows are left as zeros."""
        if self._unit is None:
            norms = np.linalg.norm(self.matrix, axis=1, keepdims=True)
            norms[norms == 0.0] = 1.0
            self._unit = self.matrix / norms
        return self._unit

    def unit_vector(self, concept_id: str) -> np.ndarray:
        try:
            return self.unit_matrix()[self.index[concept_id]]
        except KeyError:
            raise ConceptNotFoundError([concept_id]) from None


def save_text(model: EmbeddingModel, fh: TextIO) -> None:
    fh.write(f"{len(model)} {model.dimension} {model.seed}\n")
    for name, row in zip(model.names, model.matrix):
        fh.write(name + " " + " ".join(f"{x:.9g}" for x in row) + "\n")


def load_text(fh: TextIO) -> EmbeddingModel:
    header = fh.readline().split()
    if len(header) != 3:
        raise ConfigError("embedding text header must be 'n d seed'")
    n, d, seed = (int(x) for x in header)
    names = []
    rows = np.empty((n, d), dtype=np.float64)
    for i in range(n):
        parts = fh.readline().split()
        if len(parts) != d + 1:
            raise ConfigError(f"embedding row {i} has {len(parts) - 1} values, expected {d}")
        names.append(parts[0])
        rows[i] = [float(x) for x in parts[1:]]
    return EmbeddingModel(names, rows, seed)


def save_binary(model: EmbeddingModel, fh: BinaryIO) -> None:
    fh.write(BINARY_MAGIC)
    fh.write(_HEADER.pack(len(model), model.dimension, model.seed))
    for name in model.names:
        raw = name.encode("utf-8")
        fh.write(_NAME_LEN.pack(len(raw)))
        fh.write(raw)
    fh.write(np.ascontiguousarray(model.matrix, dtype="<f8").tobytes())


def load_binary(fh: BinaryIO) -> EmbeddingModel:
    magic = fh.read(len(BINARY_MAGIC))
    if magic != BINARY_MAGIC:
        raise ConfigError(f"bad embedding magic {magic!r}")
    n, d, seed = _HEADER.unpack(fh.read(_HEADER.size))
    names = []
    for _ in range(n):
        (length,) = _NAME_LEN.unpack(fh.read(_NAME_LEN.size))
        names.append(fh.read(length).decode("utf-8"))
    raw = fh.read(n * d * 8)
    if len(raw) != n * d * 8:
        raise ConfigError("truncated embedding matrix")
    matrix = np.frombuffer(raw, dtype="<f8").reshape(n, d).astype(np.float64)
    return EmbeddingModel(names, matrix, seed)
