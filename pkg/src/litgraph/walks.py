"""Second-order biased random walks over the relation graph.

A step from ``current`` given the previous node ``prev`` is drawn with
probability proportional to edge_weight(current, x) times a bias:
1/p when x is prev (return), 1 when x is adjacent to prev, 1/q
otherwise.  Two samplers are provided: precomputed alias tables per
(prev, current) edge, and rejection sampling against the first-order
distribution.  Alias tables cost O(sum of squared degrees) memory, so
the sampler switches to rejection above a configurable edge budget.

Every walk draws from its own generator seeded by (seed, pass, start
node), so walk content is independent of scheduling order and the
output is deterministic even if start nodes are processed in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InsufficientDataError
from .graph import RelationGraph
from .rng import SplitMix64, mix64

_ORDER_TAG = 0x01
_WALK_TAG = 0x02


@dataclass(frozen=True)
class WalkConfig:
    p: float = 0.25
    q: float = 0.25
    walk_length: int = 80
    walks_per_node: int = 18
    seed: int = 1
    alias_edge_budget: int = 1_000_000

    def validate(self) -> None:
        if self.p <= 0 or self.q <= 0:
            raise ConfigError("walk parameters p and q must be positive")
        if self.walk_length < 1 or self.walks_per_node < 1:
            raise ConfigError("walk_length and walks_per_node must be >= 1")


class AliasTable:
    """Vose alias method: O(1) sampling from fixed non-negative weights."""

    __slots__ = ("prob", "alias", "size")

    def __init__(self, weights: np.ndarray):
        weights = np.asarray(weights, dtype=np.float64)
        total = float(weights.sum())
        if len(weights) == 0 or total <= 0.0:
            raise ConfigError("alias table needs at least one positive weight")
        n = len(weights)
        scaled = list(weights * (n / total))
        prob = np.ones(n, dtype=np.float64)
        alias = np.zeros(n, dtype=np.int64)
        small = [i for i in range(n) if scaled[i] < 1.0]
        large = [i for i in range(n) if scaled[i] >= 1.0]
        while small and large:
            s = small.pop()
            l = large.pop()
            prob[s] = scaled[s]
            alias[s] = l
            scaled[l] = (scaled[l] + scaled[s]) - 1.0
            if scaled[l] < 1.0:
                small.append(l)
            else:
                large.append(l)
        self.prob = prob
        self.alias = alias
        self.size = n

    def sample(self, rng: SplitMix64) -> int:
        i = rng.randbelow(self.size)
        if rng.uniform() < self.prob[i]:
            return i
        return int(self.alias[i])


def step_biases(graph: RelationGraph, prev: int | None, current: int,
                p: float, q: float) -> np.ndarray:
    """Unnormalized transition weights over graph.neighbors[current]."""
    weights = graph.weights[current]
    if len(weights) == 0:
        raise InsufficientDataError(f"node {current} has no neighbors")
    if prev is None:
        return weights.copy()
    biases = np.empty(len(weights), dtype=np.float64)
    for idx, x in enumerate(graph.neighbors[current]):
        if x == prev:
            alpha = 1.0 / p
        elif graph.has_edge(int(x), prev):
            alpha = 1.0
        else:
            alpha = 1.0 / q
        biases[idx] = weights[idx] * alpha
    return biases


def step_distribution(graph: RelationGraph, prev: int | None, current: int,
                      config: WalkConfig) -> np.ndarray:
    """Normalized next-step probabilities over graph.neighbors[current]."""
    biases = step_biases(graph, prev, current, config.p, config.q)
    return biases / biases.sum()


class WalkSampler:
    """Draws walk transitions for a fixed graph and configuration."""

    def __init__(self, graph: RelationGraph, config: WalkConfig):
        config.validate()
        self.graph = graph
        self.config = config
        self._first = [AliasTable(w) if len(w) else None for w in graph.weights]
        # Alias-table memory for all (prev, current) pairs is
        # sum over directed edges of degree(current).
        second_order_cells = sum(
            int(len(graph.neighbors[int(x)]))
            for cur in range(graph.node_count)
            for x in graph.neighbors[cur]
        )
        self.uses_alias_tables = second_order_cells <= config.alias_edge_budget
        self._second: dict[tuple[int, int], AliasTable] = {}
        self._alpha_max = max(1.0 / config.p, 1.0, 1.0 / config.q)

    def first_step(self, current: int, rng: SplitMix64) -> int:
        table = self._first[current]
        if table is None:
            raise InsufficientDataError(f"node {current} has no neighbors")
        return int(self.graph.neighbors[current][table.sample(rng)])

    def next_step(self, prev: int, current: int, rng: SplitMix64) -> int:
        if self.uses_alias_tables:
            key = (prev, current)
            table = self._second.get(key)
            if table is None:
                table = AliasTable(step_biases(self.graph, prev, current,
                                               self.config.p, self.config.q))
                self._second[key] = table
            return int(self.graph.neighbors[current][table.sample(rng)])
        return self._rejection_step(prev, current, rng)

    def _rejection_step(self, prev: int, current: int, rng: SplitMix64) -> int:
        table = self._first[current]
        if table is None:
            raise InsufficientDataError(f"node {current} has no neighbors")
        p, q = self.config.p, self.config.q
        while True:
            x = int(self.graph.neighbors[current][table.sample(rng)])
            if x == prev:
                alpha = 1.0 / p
            elif self.graph.has_edge(x, prev):
                alpha = 1.0
            else:
                alpha = 1.0 / q
            if rng.uniform() * self._alpha_max < alpha:
                return x


def _walk_from(graph: RelationGraph, sampler: WalkSampler, start: int,
               length: int, rng: SplitMix64) -> list[int]:
    walk = [start]
    if graph.degree(start) == 0:
        return walk
    current = sampler.first_step(start, rng)
    walk.append(current)
    prev = start
    while len(walk) < length:
        if graph.degree(current) == 0:
            break
        nxt = sampler.next_step(prev, current, rng)
        walk.append(nxt)
        prev, current = current, nxt
    return walk


def generate_walks(graph: RelationGraph, config: WalkConfig) -> list[list[str]]:
    """All walks as concept-id sequences: walks_per_node passes, each
    pass visiting every node once in a seeded shuffled order."""
    config.validate()
    if graph.node_count == 0:
        raise InsufficientDataError("cannot walk an empty graph")
    sampler = WalkSampler(graph, config)
    walks: list[list[str]] = []
    for round_no in range(config.walks_per_node):
        order = list(range(graph.node_count))
        SplitMix64(mix64(config.seed, _ORDER_TAG, round_no)).shuffle(order)
        for start in order:
            rng = SplitMix64(mix64(config.seed, _WALK_TAG, round_no, start))
            path = _walk_from(graph, sampler, start, config.walk_length, rng)
            walks.append([graph.nodes[i] for i in path])
    return walks
