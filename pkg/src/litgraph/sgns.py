"""Skip-gram with negative sampling over walk corpora.

The trainer consumes walks (sequences of concept ids), builds the
vocabulary and a unigram^(3/4) noise distribution from them, and runs
the window/negative-sampling update loop in a kernel.  Two kernels
exist: a compiled extension and a pure-Python fallback; they implement
identical arithmetic in identical order, so the trained vectors are
bit-for-bit equal whichever one runs.  Training is single-threaded and
fully determined by the configuration seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .embedding import EmbeddingModel
from .errors import ConfigError, InsufficientDataError
from .rng import mix64, splitmix64_stream
from .walks import AliasTable

from . import _sgns_pure as _pure

try:
    from . import _sgns_speedups as _compiled
except ImportError:
    _compiled = None

COMPILED_AVAILABLE = _compiled is not None

_INIT_TAG = 0x11
_TRAIN_TAG = 0x12


@dataclass(frozen=True)
class SGNSConfig:
    dimension: int = 128
    window: int = 16
    epochs: int = 10
    negative_samples: int = 5
    initial_lr: float = 0.025
    final_lr: float = 1e-4
    seed: int = 1

    def validate(self) -> None:
        if self.dimension <= 0:
            raise ConfigError("embedding dimension must be positive")
        if self.window <= 0 or self.epochs <= 0:
            raise ConfigError("window and epochs must be positive")
        if self.negative_samples < 0:
            raise ConfigError("negative_samples must be >= 0")
        if self.initial_lr <= 0 or self.final_lr <= 0 \
                or self.final_lr > self.initial_lr:
            raise ConfigError("need 0 < final_lr <= initial_lr")


def kernel_for(backend: str):
    if backend == "auto":
        return _compiled if _compiled is not None else _pure
    if backend == "compiled":
        if _compiled is None:
            raise ConfigError("compiled training kernel is not available")
        return _compiled
    if backend == "pure":
        return _pure
    raise ConfigError(f"unknown training backend {backend!r}")


def init_vectors(count: int, dim: int, seed: int) -> np.ndarray:
    """Word2vec-style init: each entry uniform in [-0.5/dim, 0.5/dim)."""
    bits = splitmix64_stream(mix64(seed, _INIT_TAG), count * dim)
    u = (bits >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)
    return ((u - 0.5) / dim).reshape(count, dim)


def _flatten(walks: Sequence[Sequence[str]], index: dict) -> tuple:
    offsets = np.zeros(len(walks) + 1, dtype=np.int64)
    for i, walk in enumerate(walks):
        offsets[i + 1] = offsets[i] + len(walk)
    tokens = np.empty(int(offsets[-1]), dtype=np.int64)
    pos = 0
    for walk in walks:
        for tok in walk:
            tokens[pos] = index[tok]
            pos += 1
    return tokens, offsets


def train_embeddings(walks: Iterable[Sequence[str]], config: SGNSConfig,
                     backend: str = "auto") -> EmbeddingModel:
    """Train vectors over the walk corpus; vocabulary comes from the walks."""
    config.validate()
    walks = [list(w) for w in walks]
    names = sorted({tok for walk in walks for tok in walk})
    if not names:
        raise InsufficientDataError("walk corpus is empty")
    index = {name: i for i, name in enumerate(names)}
    tokens, offsets = _flatten(walks, index)

    frequencies = np.bincount(tokens, minlength=len(names)).astype(np.float64)
    noise = AliasTable(frequencies ** 0.75)

    syn0 = init_vectors(len(names), config.dimension, config.seed)
    syn1 = np.zeros_like(syn0)

    kernel = kernel_for(backend)
    state = mix64(config.seed, _TRAIN_TAG)
    done = 0
    total = config.epochs * len(tokens)
    losses = []
    for _ in range(config.epochs):
        state, done, loss = kernel.train_epoch(
            tokens, offsets, syn0, syn1, noise.prob, noise.alias,
            config.window, config.negative_samples,
            config.initial_lr, config.final_lr, done, total, state)
        losses.append(float(loss))

    model = EmbeddingModel(names, syn0, config.seed)
    model.epoch_losses = tuple(losses)
    return model


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _softplus(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


def pair_loss(center: np.ndarray, positive: np.ndarray,
              negatives: np.ndarray) -> float:
    """Loss of one (center, context) pair with its negative samples:
    -log sigmoid(u_o . v_c) - sum_k log sigmoid(-u_k . v_c)."""
    pos_dot = float(center @ positive)
    neg_dots = negatives @ center if len(negatives) else np.zeros(0)
    loss = float(_softplus(np.array([-pos_dot]))[0])
    loss += float(_softplus(np.asarray(neg_dots, dtype=np.float64)).sum())
    return loss


def pair_gradients(center: np.ndarray, positive: np.ndarray,
                   negatives: np.ndarray) -> tuple:
    """Analytic gradients of pair_loss w.r.t. (center, positive, negatives)."""
    pos_dot = float(center @ positive)
    f_pos = float(_sigmoid(np.array([pos_dot]))[0])
    g_center = -(1.0 - f_pos) * positive
    g_positive = -(1.0 - f_pos) * center
    if len(negatives):
        f_negs = _sigmoid(negatives @ center)
        g_center = g_center + f_negs @ negatives
        g_negatives = np.outer(f_negs, center)
    else:
        g_negatives = np.zeros((0, len(center)))
    return g_center, g_positive, g_negatives
