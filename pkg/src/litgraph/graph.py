"""Weighted co-occurrence graph built from stored relation counts.

Nodes are concept ids; an undirected edge's weight is the number of
supporting triples.  Adjacency is kept in sorted compressed arrays so
membership tests during walk generation are binary searches rather than
hash probes on tuples.
"""

from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from .errors import ConceptNotFoundError, InsufficientDataError


class RelationGraph:
    """Immutable undirected weighted graph over integer node indices."""

    def __init__(self, nodes: tuple[str, ...], neighbors: list, weights: list):
        self.nodes = nodes
        self.index = {name: i for i, name in enumerate(nodes)}
        self.neighbors = neighbors
        self.weights = weights
        self.edge_count = sum(len(n) for n in neighbors) // 2

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def node_id(self, concept_id: str) -> int:
        try:
            return self.index[concept_id]
        except KeyError:
            raise ConceptNotFoundError(concept_id) from None

    def degree(self, i: int) -> int:
        return len(self.neighbors[i])

    def has_edge(self, i: int, j: int) -> bool:
        nbrs = self.neighbors[i]
        pos = np.searchsorted(nbrs, j)
        return pos < len(nbrs) and nbrs[pos] == j

    def edge_weight(self, i: int, j: int) -> float:
        nbrs = self.neighbors[i]
        pos = np.searchsorted(nbrs, j)
        if pos < len(nbrs) and nbrs[pos] == j:
            return float(self.weights[i][pos])
        return 0.0

    def neighbor_names(self, concept_id: str) -> list[str]:
        i = self.node_id(concept_id)
        return [self.nodes[j] for j in self.neighbors[i]]

    def total_weight(self, i: int) -> float:
        return float(self.weights[i].sum())


def build_graph(view, min_count: int = 1,
                node_whitelist: Optional[Iterable[str]] = None) -> RelationGraph:
    """Build the co-occurrence graph from a store or snapshot view.

    Edges with fewer than ``min_count`` supporting triples are dropped;
    nodes that lose all edges are dropped with them.  ``node_whitelist``
    restricts the graph to the given concepts (both endpoints must be
    listed).
    """
    if min_count < 1:
        raise InsufficientDataError(f"min_count must be >= 1, got {min_count}")
    allowed = set(node_whitelist) if node_whitelist is not None else None
    edges = []
    for key in view.relation_keys():
        a, b = key
        if allowed is not None and (a not in allowed or b not in allowed):
            continue
        count = view.pair_count(a, b)
        if count >= min_count:
            edges.append((a, b, count))
    return graph_from_weighted_pairs(edges)


def graph_from_weighted_pairs(edges) -> RelationGraph:
    """Graph from (concept_a, concept_b, weight) rows; nodes are the
    endpoints that appear, indexed in sorted-name order."""
    names = sorted({n for a, b, _ in edges for n in (a, b)})
    index = {name: i for i, name in enumerate(names)}
    adj: list[list[tuple[int, float]]] = [[] for _ in names]
    for a, b, count in edges:
        ia, ib = index[a], index[b]
        adj[ia].append((ib, float(count)))
        adj[ib].append((ia, float(count)))
    neighbors = []
    weights = []
    for rows in adj:
        rows.sort()
        neighbors.append(np.array([j for j, _ in rows], dtype=np.int64))
        weights.append(np.array([w for _, w in rows], dtype=np.float64))
    return RelationGraph(tuple(names), neighbors, weights)
