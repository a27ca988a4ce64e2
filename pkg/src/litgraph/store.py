"""Relation triple store: counts, statistics, snapshots, persistence.

On-disk layout inside a data directory:

    triples.log          append-only JSONL of inserts and article drops
    index/<n>/           compacted generation written by publish_snapshot
        meta.json        snapshot id, counts, log offset (no timestamps)
        summaries.jsonl  one line per relation key, sorted
        stats.jsonl      one line per concept, sorted
        embedding.kfem   optional binary embedding
    MANIFEST             names the current generation; replaced atomically

Readers obtain an immutable :class:`SnapshotView`; the writer keeps
mutating the live store without ever touching published snapshots.
Per-key triple collections are stored as tuples replaced on write, so a
snapshot is a cheap shallow copy of the top-level dictionaries.
"""

from __future__ import annotations

import json
import os
import shutil
from dataclasses import dataclass
from datetime import date, datetime, timezone
from fractions import Fraction
from typing import Iterable, Optional

from .errors import (
    ConceptNotFoundError,
    ConfigError,
    InsufficientDataError,
    InvalidTripleError,
    RelationNotFoundError,
)
from .extractor import RelationTriple

RelationKey = tuple[str, str]

MANIFEST_NAME = "MANIFEST"
LOG_NAME = "triples.log"
INDEX_DIR = "index"


def relation_key(a: str, b: str) -> RelationKey:
    if a == b:
        raise InvalidTripleError(f"self-relation {a!r}")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class RelationSummary:
    key: RelationKey
    count: int
    first_pub_date: date
    last_pub_date: date


@dataclass(frozen=True)
class ConceptStats:
    concept_id: str
    total_relations: int
    partner_count: int


@dataclass(frozen=True)
class PairProbabilities:
    """Exact conditional-probability ratios for a concept pair."""

    p_a_given_b: Fraction
    p_b_given_a: Fraction


@dataclass(frozen=True)
class RelatedConcept:
    concept_id: str
    count: int
    p_a_given_b: Fraction
    p_b_given_a: Fraction


@dataclass(frozen=True)
class InsertReport:
    inserted: int
    deduplicated: int
    articles_replaced: int


def format_probability(value: Fraction) -> str:
    """Display form of a probability: three significant digits."""
    return f"{float(value):.3g}"


def triple_to_json(t: RelationTriple) -> dict:
    return {
        "a": t.concept_a,
        "b": t.concept_b,
        "article_id": t.article_id,
        "sentence": t.sentence_text,
        "sentence_index": t.sentence_index,
        "pub_date": t.pub_date.isoformat(),
        "extraction_date": t.extraction_date.isoformat(),
        "species": list(t.species),
        "citation": t.citation,
    }


def triple_from_json(obj: dict) -> RelationTriple:
    return RelationTriple(
        concept_a=obj["a"],
        concept_b=obj["b"],
        article_id=obj["article_id"],
        sentence_text=obj["sentence"],
        sentence_index=obj["sentence_index"],
        pub_date=date.fromisoformat(obj["pub_date"]),
        extraction_date=date.fromisoformat(obj["extraction_date"]),
        species=tuple(obj.get("species", ())),
        citation=obj.get("citation", ""),
    )


class _RelationViewOps:
    """Shared read operations over triple-store state.

    Implementations provide ``_by_key`` (key -> tuple of triples),
    ``_partners`` (concept -> {partner: count}), ``_articles``
    (article_id -> tuple of triples) and ``categories`` (optional
    concept -> category-string map).
    """

    _by_key: dict
    _partners: dict
    _articles: dict
    categories: Optional[dict]

    # -- counts ---------------------------------------------------------

    @property
    def triple_count(self) -> int:
        return sum(len(v) for v in self._by_key.values())

    @property
    def relation_count(self) -> int:
        return len(self._by_key)

    @property
    def concept_count(self) -> int:
        return len(self._partners)

    @property
    def article_count(self) -> int:
        return len(self._articles)

    def relation_keys(self) -> Iterable[RelationKey]:
        return self._by_key.keys()

    def has_concept(self, concept_id: str) -> bool:
        return concept_id in self._partners

    def has_relation(self, a: str, b: str) -> bool:
        return relation_key(a, b) in self._by_key

    # -- summaries and statistics ---------------------------------------

    def summary(self, key: RelationKey) -> RelationSummary:
        triples = self._by_key.get(key)
        if not triples:
            raise RelationNotFoundError(f"no relation {key[0]!r} / {key[1]!r}")
        dates = [t.pub_date for t in triples]
        return RelationSummary(key=key, count=len(triples),
                               first_pub_date=min(dates), last_pub_date=max(dates))

    def summaries(self) -> Iterable[RelationSummary]:
        for key in sorted(self._by_key):
            yield self.summary(key)

    def pair_count(self, a: str, b: str) -> int:
        return len(self._by_key.get(relation_key(a, b), ()))

    def concept_stats(self, concept_id: str) -> ConceptStats:
        partners = self._partners.get(concept_id)
        if not partners:
            raise ConceptNotFoundError(concept_id)
        return ConceptStats(
            concept_id=concept_id,
            total_relations=sum(partners.values()),
            partner_count=len(partners),
        )

    def all_concept_stats(self) -> list[ConceptStats]:
        return [self.concept_stats(c) for c in sorted(self._partners)]

    def conditional_probability(self, a: str, b: str) -> PairProbabilities:
        """P(A|B) = count(a,b)/total(b) and P(B|A) = count(a,b)/total(a)."""
        missing = [c for c in (a, b) if c not in self._partners]
        if missing:
            raise ConceptNotFoundError(missing)
        count = self.pair_count(a, b)
        if count == 0:
            return PairProbabilities(Fraction(0), Fraction(0))
        total_a = sum(self._partners[a].values())
        total_b = sum(self._partners[b].values())
        return PairProbabilities(
            p_a_given_b=Fraction(count, total_b),
            p_b_given_a=Fraction(count, total_a),
        )

    def related_concepts(self, a: str, category_filter: Optional[str] = None,
                         sort_by: str = "count", limit: int = 50,
                         offset: int = 0) -> list[RelatedConcept]:
        partners = self._partners.get(a)
        if not partners:
            raise ConceptNotFoundError(a)
        if sort_by not in ("count", "p_a_given_b", "p_b_given_a"):
            raise ConfigError(f"unknown sort key {sort_by!r}")
        if category_filter is not None and self.categories is None:
            raise ConfigError("store has no category map; cannot filter by category")
        total_a = sum(partners.values())
        rows = []
        for partner, count in partners.items():
            if category_filter is not None and \
                    self.categories.get(partner) != category_filter:
                continue
            total_p = sum(self._partners[partner].values())
            rows.append(RelatedConcept(
                concept_id=partner,
                count=count,
                p_a_given_b=Fraction(count, total_p),
                p_b_given_a=Fraction(count, total_a),
            ))
        rows.sort(key=lambda r: (-getattr(r, sort_by) if sort_by != "count"
                                 else -r.count, r.concept_id))
        return rows[offset:offset + limit]

    def evidence(self, key: RelationKey, order: str = "pub_date_asc",
                 limit: int = 50, offset: int = 0) -> list[RelationTriple]:
        triples = self._by_key.get(key)
        if not triples:
            raise RelationNotFoundError(f"no relation {key[0]!r} / {key[1]!r}")
        if order == "pub_date_asc":
            ordered = sorted(triples, key=lambda t: (t.pub_date, t.article_id,
                                                     t.sentence_index))
        elif order == "pub_date_desc":
            ordered = sorted(triples, key=lambda t: (t.article_id, t.sentence_index))
            ordered.sort(key=lambda t: t.pub_date, reverse=True)
        else:
            raise ConfigError(f"unknown evidence order {order!r}")
        return ordered[offset:offset + limit]

    def all_triples(self) -> Iterable[RelationTriple]:
        for key in sorted(self._by_key):
            yield from self._by_key[key]

    def triples_before(self, cutoff: date) -> "SnapshotView":
        """Immutable view restricted to triples with pub_date <= cutoff."""
        view = SnapshotView.empty(categories=self.categories)
        by_key = {}
        for key, triples in self._by_key.items():
            kept = tuple(t for t in triples if t.pub_date <= cutoff)
            if kept:
                by_key[key] = kept
        view._by_key = by_key
        view._partners = _partners_from_keys(by_key)
        articles: dict[str, list] = {}
        for triples in by_key.values():
            for t in triples:
                articles.setdefault(t.article_id, []).append(t)
        view._articles = {aid: tuple(ts) for aid, ts in articles.items()}
        return view


def _partners_from_keys(by_key: dict) -> dict:
    partners: dict[str, dict[str, int]] = {}
    for (a, b), triples in by_key.items():
        n = len(triples)
        partners.setdefault(a, {})[b] = n
        partners.setdefault(b, {})[a] = n
    return partners


class SnapshotView(_RelationViewOps):
    """Immutable published state: counts, summaries, optional embedding."""

    def __init__(self, snapshot_id: int, created_at: Optional[datetime],
                 by_key: dict, partners: dict, articles: dict,
                 categories: Optional[dict], embedding=None, graph=None):
        self.snapshot_id = snapshot_id
        self.created_at = created_at
        self._by_key = by_key
        self._partners = partners
        self._articles = articles
        self.categories = categories
        self.embedding = embedding
        self.graph = graph

    @classmethod
    def empty(cls, categories: Optional[dict] = None) -> "SnapshotView":
        return cls(0, None, {}, {}, {}, categories)

    def stats_payload(self) -> dict:
        return {
            "concepts": self.concept_count,
            "relations": self.relation_count,
            "triples": self.triple_count,
            "articles": self.article_count,
            "snapshot_id": self.snapshot_id,
            "last_update": self.created_at.isoformat() if self.created_at else None,
        }


class Store(_RelationViewOps):
    """Mutable triple store with single-writer semantics.

    ``Store()`` is purely in-memory; ``Store.open(data_dir)`` attaches an
    append-only log and generation directory and replays existing state.
    """

    def __init__(self, categories: Optional[dict] = None):
        self._by_key: dict[RelationKey, tuple[RelationTriple, ...]] = {}
        self._partners: dict[str, dict[str, int]] = {}
        self._articles: dict[str, tuple[RelationTriple, ...]] = {}
        self._idents: set[tuple] = set()
        self.categories = categories
        self._data_dir: Optional[str] = None
        self._log_fh = None
        self._last_snapshot_id = 0

    # -- persistence ------------------------------------------------------

    @classmethod
    def open(cls, data_dir, categories: Optional[dict] = None) -> "Store":
        store = cls(categories=categories)
        store._data_dir = str(data_dir)
        os.makedirs(store._data_dir, exist_ok=True)
        log_path = os.path.join(store._data_dir, LOG_NAME)
        store._replay_log(log_path)
        store._log_fh = open(log_path, "a", encoding="utf-8")
        manifest = read_manifest(store._data_dir)
        if manifest is not None:
            store._last_snapshot_id = manifest["generation"]
        return store

    def close(self) -> None:
        if self._log_fh is not None:
            self._log_fh.close()
            self._log_fh = None

    def _replay_log(self, log_path, max_bytes: Optional[int] = None) -> None:
        if not os.path.exists(log_path):
            return
        consumed = 0
        with open(log_path, "rb") as fh:
            for raw in fh:
                if max_bytes is not None and consumed + len(raw) > max_bytes:
                    break
                consumed += len(raw)
                if not raw.endswith(b"\n"):
                    break  # torn final write from a crash; ignore
                line = raw.decode("utf-8").strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError:
                    break  # torn write that still ended with a newline
                if obj.get("op") == "drop":
                    self._remove_article(obj["article_id"])
                else:
                    self._add_triple(triple_from_json(obj))

    def _log(self, obj: dict) -> None:
        if self._log_fh is not None:
            self._log_fh.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")

    def _log_sync(self) -> None:
        if self._log_fh is not None:
            self._log_fh.flush()
            os.fsync(self._log_fh.fileno())

    # -- mutation ---------------------------------------------------------

    def _add_triple(self, t: RelationTriple) -> bool:
        ident = (t.concept_a, t.concept_b, t.article_id, t.sentence_index)
        if ident in self._idents:
            return False
        self._idents.add(ident)
        key = t.key
        self._by_key[key] = self._by_key.get(key, ()) + (t,)
        n = len(self._by_key[key])
        self._partners.setdefault(t.concept_a, {})[t.concept_b] = n
        self._partners.setdefault(t.concept_b, {})[t.concept_a] = n
        self._articles[t.article_id] = self._articles.get(t.article_id, ()) + (t,)
        return True

    def _remove_article(self, article_id: str) -> None:
        old = self._articles.pop(article_id, ())
        for t in old:
            self._idents.discard((t.concept_a, t.concept_b, t.article_id,
                                  t.sentence_index))
        touched = {t.key for t in old}
        for key in touched:
            kept = tuple(t for t in self._by_key.get(key, ())
                         if t.article_id != article_id)
            a, b = key
            if kept:
                self._by_key[key] = kept
                self._partners[a][b] = len(kept)
                self._partners[b][a] = len(kept)
            else:
                self._by_key.pop(key, None)
                for u, v in ((a, b), (b, a)):
                    d = self._partners.get(u)
                    if d is not None:
                        d.pop(v, None)
                        if not d:
                            del self._partners[u]

    def ingest_article(self, article_id: str, triples: Iterable[RelationTriple],
                       sync: bool = True) -> InsertReport:
        """Insert one article's triples, replacing any prior version.

        A re-delivered article that no longer yields triples still drops
        the ones stored for it earlier.
        """
        triples = list(triples)
        for t in triples:
            if t.article_id != article_id:
                raise InvalidTripleError(
                    f"triple belongs to {t.article_id!r}, not {article_id!r}")
        replaced = 0
        if self._articles.get(article_id):
            self._remove_article(article_id)
            self._log({"op": "drop", "article_id": article_id})
            replaced = 1
        inserted = 0
        deduplicated = 0
        for t in triples:
            if self._add_triple(t):
                self._log(triple_to_json(t))
                inserted += 1
            else:
                deduplicated += 1
        if sync:
            self._log_sync()
        return InsertReport(inserted=inserted, deduplicated=deduplicated,
                            articles_replaced=replaced)

    def sync(self) -> None:
        self._log_sync()

    def insert_triples(self, batch: Iterable[RelationTriple]) -> InsertReport:
        """Insert a batch with revision semantics.

        Exact duplicates (key, article, sentence) are dropped.  Articles
        already present in the store are replaced by their triples in this
        batch.  An article split across two batches is a revision, not an
        accumulation.
        """
        batch = list(batch)
        for t in batch:
            if not isinstance(t, RelationTriple):
                raise InvalidTripleError(f"not a RelationTriple: {t!r}")
        by_article: dict[str, list[RelationTriple]] = {}
        for t in batch:
            by_article.setdefault(t.article_id, []).append(t)
        inserted = 0
        deduplicated = 0
        replaced = 0
        for article_id, triples in by_article.items():
            if self._articles.get(article_id):
                self._remove_article(article_id)
                self._log({"op": "drop", "article_id": article_id})
                replaced += 1
            for t in triples:
                if self._add_triple(t):
                    self._log(triple_to_json(t))
                    inserted += 1
                else:
                    deduplicated += 1
        self._log_sync()
        return InsertReport(inserted=inserted, deduplicated=deduplicated,
                            articles_replaced=replaced)

    # -- snapshots ----------------------------------------------------------

    def _state_copy(self):
        by_key = dict(self._by_key)
        partners = {c: dict(p) for c, p in self._partners.items()}
        articles = dict(self._articles)
        return by_key, partners, articles

    def publish_snapshot(self, embedding=None, graph=None) -> SnapshotView:
        """Publish the current state as an immutable snapshot.

        For a persistent store this writes a new generation directory and
        atomically repoints MANIFEST at it; readers of older snapshots are
        unaffected, and a crash anywhere in the middle leaves the previous
        MANIFEST (and generation) intact.
        """
        snapshot_id = self._last_snapshot_id + 1
        created_at = datetime.now(timezone.utc)
        by_key, partners, articles = self._state_copy()
        snap = SnapshotView(snapshot_id, created_at, by_key, partners, articles,
                            dict(self.categories) if self.categories else self.categories,
                            embedding=embedding, graph=graph)
        if self._data_dir is not None:
            self._log_sync()
            self._write_generation(snap)
            write_manifest(self._data_dir, snapshot_id, created_at)
        self._last_snapshot_id = snapshot_id
        return snap

    def _write_generation(self, snap: SnapshotView) -> None:
        index_dir = os.path.join(self._data_dir, INDEX_DIR)
        os.makedirs(index_dir, exist_ok=True)
        building = os.path.join(index_dir, f".building-{snap.snapshot_id}")
        final = os.path.join(index_dir, str(snap.snapshot_id))
        for stale in (building, final):
            if os.path.exists(stale):
                shutil.rmtree(stale)
        os.makedirs(building)

        log_offset = os.path.getsize(os.path.join(self._data_dir, LOG_NAME))
        meta = {
            "snapshot_id": snap.snapshot_id,
            "log_offset": log_offset,
            "counts": {
                "triples": snap.triple_count,
                "relations": snap.relation_count,
                "concepts": snap.concept_count,
                "articles": snap.article_count,
            },
        }
        self._write_file(os.path.join(building, "meta.json"),
                         json.dumps(meta, sort_keys=True, indent=1) + "\n")
        lines = []
        for s in snap.summaries():
            lines.append(json.dumps({
                "a": s.key[0], "b": s.key[1], "count": s.count,
                "first_pub_date": s.first_pub_date.isoformat(),
                "last_pub_date": s.last_pub_date.isoformat(),
            }, sort_keys=True))
        self._write_file(os.path.join(building, "summaries.jsonl"),
                         "".join(line + "\n" for line in lines))
        lines = []
        for st in snap.all_concept_stats():
            lines.append(json.dumps({
                "concept": st.concept_id,
                "total_relations": st.total_relations,
                "partner_count": st.partner_count,
            }, sort_keys=True))
        self._write_file(os.path.join(building, "stats.jsonl"),
                         "".join(line + "\n" for line in lines))
        if snap.embedding is not None:
            from .embedding import save_binary
            with open(os.path.join(building, "embedding.kfem"), "wb") as fh:
                save_binary(snap.embedding, fh)
                fh.flush()
                os.fsync(fh.fileno())
        os.rename(building, final)

    @staticmethod
    def _write_file(path: str, content: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(content)
            fh.flush()
            os.fsync(fh.fileno())


def read_manifest(data_dir) -> Optional[dict]:
    path = os.path.join(str(data_dir), MANIFEST_NAME)
    if not os.path.exists(path):
        return None
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def write_manifest(data_dir, generation: int, created_at: datetime) -> None:
    path = os.path.join(str(data_dir), MANIFEST_NAME)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump({"generation": generation,
                   "created_at": created_at.isoformat()}, fh, sort_keys=True)
        fh.write("\n")
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def load_snapshot(data_dir, categories: Optional[dict] = None) -> SnapshotView:
    """Load the currently published snapshot of a data directory.

    Reconstructs the published state by replaying the triple log up to the
    offset recorded at publish time, and attaches the generation's
    embedding when present.  Returns an empty snapshot (id 0) when nothing
    has been published yet.
    """
    data_dir = str(data_dir)
    manifest = read_manifest(data_dir)
    if manifest is None:
        return SnapshotView.empty(categories=categories)
    gen = manifest["generation"]
    gen_dir = os.path.join(data_dir, INDEX_DIR, str(gen))
    with open(os.path.join(gen_dir, "meta.json"), "r", encoding="utf-8") as fh:
        meta = json.load(fh)
    shadow = Store(categories=categories)
    shadow._replay_log(os.path.join(data_dir, LOG_NAME),
                       max_bytes=meta["log_offset"])
    by_key, partners, articles = shadow._state_copy()
    embedding = None
    emb_path = os.path.join(gen_dir, "embedding.kfem")
    if os.path.exists(emb_path):
        from .embedding import load_binary
        with open(emb_path, "rb") as fh:
            embedding = load_binary(fh)
    created = datetime.fromisoformat(manifest["created_at"])
    snap = SnapshotView(gen, created, by_key, partners, articles,
                        categories, embedding=embedding)
    counts = meta["counts"]
    if (counts["triples"], counts["relations"]) != (snap.triple_count,
                                                    snap.relation_count):
        raise InsufficientDataError(
            f"generation {gen} does not match the replayed log "
            f"(expected {counts['triples']} triples, got {snap.triple_count})")
    return snap
