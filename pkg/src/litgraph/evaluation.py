"""Link-prediction evaluation: AUROC of embedding similarity, and the
temporal-holdout experiment that scores newly appearing relations by
their mutual rank under a model trained only on older data.

AUROC is computed exactly from integer rank statistics: with P positive
and N negative scores, 2*U = 2*(positive-above-negative pairs) + ties,
and AUROC = U / (P*N).  This matches the O(P*N) pairwise definition
bit for bit, including the ties-count-half convention.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from datetime import date
from typing import Optional, Sequence, TextIO

import numpy as np

from .errors import InsufficientDataError
from .graph import RelationGraph, build_graph
from .embedding import EmbeddingModel
from .rng import SplitMix64, mix64
from .semantics import PREDICTION_TOP_K, mutual_rank_detail
from .sgns import SGNSConfig, train_embeddings
from .walks import WalkConfig, generate_walks

_NEGATIVE_TAG = 0x21


@dataclass(frozen=True)
class AurocReport:
    auroc: float
    positives: int
    negatives: int
    seed: int
    roc_points: tuple[tuple[float, float, float], ...]  # (threshold, fpr, tpr)


@dataclass(frozen=True)
class HoldoutReport:
    cutoff: date
    k: int
    new_relations_total: int
    excluded_unseen_concept: int
    unpredictable: int
    rank_histogram: tuple[int, ...]  # index 0 holds rank 1
    one_sided_count: int

    def accounting_holds(self) -> bool:
        return (sum(self.rank_histogram) + self.unpredictable
                == self.new_relations_total - self.excluded_unseen_concept)


def auroc_exact(positive_scores: Sequence[float],
                negative_scores: Sequence[float]) -> float:
    """Fraction of (positive, negative) pairs ranked correctly, ties 1/2."""
    if not positive_scores or not negative_scores:
        raise InsufficientDataError("need at least one score of each class")
    events: dict[float, list[int]] = {}
    for s in positive_scores:
        events.setdefault(float(s), [0, 0])[0] += 1
    for s in negative_scores:
        events.setdefault(float(s), [0, 0])[1] += 1
    twice_u = 0
    negatives_below = 0
    for score in sorted(events):
        pos_here, neg_here = events[score]
        twice_u += pos_here * (2 * negatives_below + neg_here)
        negatives_below += neg_here
    return twice_u / (2 * len(positive_scores) * len(negative_scores))


def roc_points(positive_scores: Sequence[float],
               negative_scores: Sequence[float]) -> tuple:
    """Threshold sweep (predict positive when score >= threshold), from
    the all-negative corner (0,0) to the all-positive corner (1,1)."""
    p = len(positive_scores)
    n = len(negative_scores)
    events: dict[float, list[int]] = {}
    for s in positive_scores:
        events.setdefault(float(s), [0, 0])[0] += 1
    for s in negative_scores:
        events.setdefault(float(s), [0, 0])[1] += 1
    points = [(math.inf, 0.0, 0.0)]
    tp = fp = 0
    for score in sorted(events, reverse=True):
        pos_here, neg_here = events[score]
        tp += pos_here
        fp += neg_here
        points.append((score, fp / n, tp / p))
    return tuple(points)


def _pair_cosines(pairs, graph: RelationGraph, model: EmbeddingModel) -> list[float]:
    unit = model.unit_matrix()
    rows = {name: model.index[name] for name in graph.nodes}
    scores = []
    for i, j in pairs:
        a = unit[rows[graph.nodes[i]]]
        b = unit[rows[graph.nodes[j]]]
        scores.append(float(a @ b))
    return scores


def sample_non_edges(graph: RelationGraph, count: int, seed: int) -> list[tuple[int, int]]:
    """Distinct non-adjacent node pairs (i < j), uniform given the seed."""
    n = graph.node_count
    total_pairs = n * (n - 1) // 2
    available = total_pairs - graph.edge_count
    if available <= 0:
        raise InsufficientDataError("graph has no non-adjacent pairs to sample")
    count = min(count, available)
    rng = SplitMix64(mix64(seed, _NEGATIVE_TAG))
    if count * 2 >= available:
        # Dense request: enumerate, shuffle, slice.
        pool = [(i, j) for i in range(n) for j in range(i + 1, n)
                if not graph.has_edge(i, j)]
        rng.shuffle(pool)
        return pool[:count]
    chosen: set[tuple[int, int]] = set()
    picked: list[tuple[int, int]] = []
    while len(picked) < count:
        i = rng.randbelow(n)
        j = rng.randbelow(n)
        if i == j:
            continue
        pair = (i, j) if i < j else (j, i)
        if pair in chosen or graph.has_edge(pair[0], pair[1]):
            continue
        chosen.add(pair)
        picked.append(pair)
    return picked


def auroc_link_prediction(graph: RelationGraph, model: EmbeddingModel,
                          negative_ratio: float = 1.0, seed: int = 0,
                          positive_pairs: Optional[list] = None) -> AurocReport:
    """AUROC of cosine similarity separating edges from sampled non-edges.

    ``positive_pairs`` overrides the positive class (used to score
    held-out edges that were removed from the training graph).
    """
    if graph.edge_count < 2:
        raise InsufficientDataError("need at least 2 edges to evaluate")
    if positive_pairs is None:
        positive_pairs = [(i, int(j)) for i in range(graph.node_count)
                          for j in graph.neighbors[i] if i < j]
    if not positive_pairs:
        raise InsufficientDataError("no positive pairs to evaluate")
    wanted = max(1, math.ceil(negative_ratio * len(positive_pairs)))
    negative_pairs = sample_non_edges(graph, wanted, seed)
    pos_scores = _pair_cosines(positive_pairs, graph, model)
    neg_scores = _pair_cosines(negative_pairs, graph, model)
    return AurocReport(
        auroc=auroc_exact(pos_scores, neg_scores),
        positives=len(pos_scores),
        negatives=len(neg_scores),
        seed=seed,
        roc_points=roc_points(pos_scores, neg_scores),
    )


def write_auroc_json(report: AurocReport, fh: TextIO) -> None:
    json.dump({"auroc": report.auroc, "positives": report.positives,
               "negatives": report.negatives, "seed": report.seed},
              fh, sort_keys=True)
    fh.write("\n")


def write_roc_csv(report: AurocReport, fh: TextIO) -> None:
    writer = csv.writer(fh)
    writer.writerow(["threshold", "fpr", "tpr"])
    for threshold, fpr, tpr in report.roc_points:
        writer.writerow([repr(threshold) if math.isfinite(threshold) else "inf",
                         repr(fpr), repr(tpr)])


def temporal_holdout(store, cutoff: date, walk_cfg: WalkConfig,
                     sgns_cfg: SGNSConfig, k: int = PREDICTION_TOP_K) -> HoldoutReport:
    """Score every relation that first appears after the cutoff by its
    mutual rank under a model trained on pre-cutoff triples only."""
    pre_view = store.triples_before(cutoff)
    graph = build_graph(pre_view)
    if graph.node_count == 0:
        raise InsufficientDataError(f"no triples dated on or before {cutoff}")
    walks = generate_walks(graph, walk_cfg)
    model = train_embeddings(walks, sgns_cfg)

    pre_keys = set(pre_view.relation_keys())
    new_keys = [key for key in sorted(store.relation_keys())
                if key not in pre_keys]
    histogram = [0] * k
    excluded = 0
    unpredictable = 0
    one_sided = 0
    for a, b in new_keys:
        if not (pre_view.has_concept(a) and pre_view.has_concept(b)):
            excluded += 1
            continue
        rank, was_one_sided = mutual_rank_detail(a, b, k, model=model, graph=graph)
        if rank is None:
            unpredictable += 1
        else:
            histogram[rank - 1] += 1
            if was_one_sided:
                one_sided += 1
    return HoldoutReport(
        cutoff=cutoff,
        k=k,
        new_relations_total=len(new_keys),
        excluded_unseen_concept=excluded,
        unpredictable=unpredictable,
        rank_histogram=tuple(histogram),
        one_sided_count=one_sided,
    )


def write_holdout_json(report: HoldoutReport, fh: TextIO) -> None:
    json.dump({
        "cutoff": report.cutoff.isoformat(),
        "k": report.k,
        "new_relations_total": report.new_relations_total,
        "excluded_unseen_concept": report.excluded_unseen_concept,
        "unpredictable": report.unpredictable,
        "rank_histogram": list(report.rank_histogram),
        "one_sided_count": report.one_sided_count,
    }, fh, sort_keys=True)
    fh.write("\n")
