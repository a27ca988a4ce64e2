"""Semantic-relatedness queries over a trained embedding.

A query is the unit-normalized sum of the selected concepts' vectors;
results are all other embedded concepts ranked by cosine against it.
Rankings restricted to concepts without a direct relation to the query
concept drive the relation-prediction protocol: a pair's recorded rank
is the better of its two mutual positions in those filtered lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .embedding import EmbeddingModel
from .errors import ConceptNotFoundError, ConfigError, DegenerateQueryError
from .graph import RelationGraph

DEFAULT_TOP_K = 20
PREDICTION_TOP_K = 40


@dataclass(frozen=True)
class QueryVector:
    vector: np.ndarray
    source_concepts: tuple[str, ...]


@dataclass(frozen=True)
class SemanticHit:
    concept_id: str
    score: float
    directly_related: bool


def combine(concepts: Sequence[str], model: EmbeddingModel) -> QueryVector:
    """Unit-normalized sum of the concept vectors."""
    if not concepts:
        raise DegenerateQueryError("no concepts given")
    missing = sorted({c for c in concepts if c not in model})
    if missing:
        raise ConceptNotFoundError(missing)
    total = np.zeros(model.dimension, dtype=np.float64)
    for c in concepts:
        total += model.vector(c)
    norm = float(np.linalg.norm(total))
    if norm == 0.0:
        raise DegenerateQueryError("concept vectors sum to zero")
    # Order-insensitive dedup of the source list.
    return QueryVector(total / norm, tuple(dict.fromkeys(concepts)))


def _is_direct(concept_id: str, sources: Iterable[str],
               graph: Optional[RelationGraph]) -> bool:
    if graph is None:
        return False
    j = graph.index.get(concept_id)
    if j is None:
        return False
    for src in sources:
        i = graph.index.get(src)
        if i is not None and graph.has_edge(i, j):
            return True
    return False


def _ranked_hits(query: QueryVector, model: EmbeddingModel,
                 graph: Optional[RelationGraph],
                 exclude: Iterable[str] = ()) -> list[SemanticHit]:
    """Every embedded concept except sources/excluded, best score first,
    ties broken by concept_id ascending."""
    scores = model.unit_matrix() @ query.vector
    skip = set(exclude)
    skip.update(query.source_concepts)
    hits = []
    for i, name in enumerate(model.names):
        if name in skip:
            continue
        hits.append(SemanticHit(
            concept_id=name,
            score=float(scores[i]),
            directly_related=_is_direct(name, query.source_concepts, graph),
        ))
    hits.sort(key=lambda h: (-h.score, h.concept_id))
    return hits


def top_k_related(query: QueryVector, k: int = DEFAULT_TOP_K,
                  exclude: Iterable[str] = (), *,
                  model: EmbeddingModel,
                  graph: Optional[RelationGraph]) -> list[SemanticHit]:
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    return _ranked_hits(query, model, graph, exclude)[:k]


def query_hits(query: QueryVector, k: int = DEFAULT_TOP_K, *,
               exclude_direct: bool = False,
               model: EmbeddingModel,
               graph: Optional[RelationGraph]) -> list[SemanticHit]:
    """Ranked hits for a query; with exclude_direct, concepts directly
    related to any source are dropped before the cut to k."""
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    ranked = _ranked_hits(query, model, graph)
    if exclude_direct:
        ranked = [h for h in ranked if not h.directly_related]
    return ranked[:k]


def related_not_connected(concept: str, k: int = PREDICTION_TOP_K, *,
                          model: EmbeddingModel,
                          graph: RelationGraph) -> list[SemanticHit]:
    """Top-k concepts by cosine among those with no direct relation to
    the query concept.  Rank positions in this filtered list (1-based)
    are what the prediction protocol records."""
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    query = combine([concept], model)
    ranked = _ranked_hits(query, model, graph)
    return [h for h in ranked if not h.directly_related][:k]


def mutual_rank_detail(a: str, b: str, k: int = PREDICTION_TOP_K, *,
                       model: EmbeddingModel,
                       graph: RelationGraph) -> tuple[Optional[int], bool]:
    """(rank, one_sided) for an unconnected pair.

    rank is the better (lower) of b's position in a's filtered list and
    a's position in b's; when only one side lists the other, that rank
    is recorded and one_sided is True; when neither does, rank is None
    (the pair counts as unpredictable).
    """
    missing = sorted({c for c in (a, b) if c not in model})
    if missing:
        raise ConceptNotFoundError(missing)
    ia, ib = graph.index.get(a), graph.index.get(b)
    if ia is not None and ib is not None and graph.has_edge(ia, ib):
        raise DegenerateQueryError(
            f"{a!r} and {b!r} are directly related; "
            "mutual rank applies to unconnected pairs")
    rank_ab = _position_of(b, related_not_connected(a, k, model=model, graph=graph))
    rank_ba = _position_of(a, related_not_connected(b, k, model=model, graph=graph))
    if rank_ab is not None and rank_ba is not None:
        return min(rank_ab, rank_ba), False
    if rank_ab is not None:
        return rank_ab, True
    if rank_ba is not None:
        return rank_ba, True
    return None, False


def mutual_rank(a: str, b: str, k: int = PREDICTION_TOP_K, *,
                model: EmbeddingModel,
                graph: RelationGraph) -> Optional[int]:
    rank, _ = mutual_rank_detail(a, b, k, model=model, graph=graph)
    return rank


def _position_of(concept: str, hits: list[SemanticHit]) -> Optional[int]:
    for pos, hit in enumerate(hits, start=1):
        if hit.concept_id == concept:
            return pos
    return None
