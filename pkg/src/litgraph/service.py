"""HTTP API over the current snapshot.

All read endpoints resolve ``state.snapshot`` exactly once per request
and answer entirely from that object, so every response is internally
consistent even while an update is swapping in the next snapshot.  The
update itself runs in a background thread; a second trigger while one
is in flight is refused with HTTP 409 and code "updating".
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Callable, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .errors import (
    ConceptNotFoundError,
    DegenerateQueryError,
    RelationNotFoundError,
)
from .extractor import RelationTriple
from .graph import build_graph
from .lexicon import ConceptCategory, Lexicon
from .semantics import combine, query_hits
from .store import SnapshotView, format_probability, relation_key


class ApiError(Exception):
    def __init__(self, http_status: int, code: str, message: str):
        super().__init__(message)
        self.http_status = http_status
        self.code = code
        self.message = message


def not_found(message: str) -> ApiError:
    return ApiError(404, "not_found", message)


def bad_request(message: str) -> ApiError:
    return ApiError(400, "bad_request", message)


class ServiceState:
    """Shared mutable service state: one swappable snapshot reference."""

    def __init__(self, lexicon: Lexicon, snapshot: SnapshotView,
                 update_runner: Optional[Callable[[], SnapshotView]] = None):
        self.lexicon = lexicon
        self.concepts_by_id = lexicon.by_id()
        self.update_runner = update_runner
        self._update_lock = threading.Lock()
        self._update_thread: Optional[threading.Thread] = None
        self.last_update_error: Optional[str] = None
        self.snapshot = self._prepare(snapshot)

    @staticmethod
    def _prepare(snapshot: SnapshotView) -> SnapshotView:
        if snapshot.embedding is not None and snapshot.graph is None:
            snapshot.graph = build_graph(snapshot)
        return snapshot

    def swap_snapshot(self, snapshot: SnapshotView) -> None:
        # Single reference assignment: readers see either the old or the
        # new snapshot, never a mixture.
        self.snapshot = self._prepare(snapshot)

    def trigger_update(self) -> int:
        if self.update_runner is None:
            raise bad_request("this server has no update pipeline configured")
        if not self._update_lock.acquire(blocking=False):
            raise ApiError(409, "updating", "an update is already building")
        building = self.snapshot.snapshot_id + 1

        def run():
            try:
                new_snapshot = self.update_runner()
                self.swap_snapshot(new_snapshot)
                self.last_update_error = None
            except Exception as exc:
                self.last_update_error = repr(exc)
            finally:
                self._update_lock.release()

        self._update_thread = threading.Thread(target=run, daemon=True)
        self._update_thread.start()
        return building

    def wait_for_update(self, timeout: Optional[float] = None) -> None:
        thread = self._update_thread
        if thread is not None:
            thread.join(timeout)


def _probability_payload(value: Fraction) -> dict:
    return {
        "display": format_probability(value),
        "numerator": value.numerator,
        "denominator": value.denominator,
    }


def _triple_payload(t: RelationTriple) -> dict:
    return {
        "article_id": t.article_id,
        "sentence": t.sentence_text,
        "sentence_index": t.sentence_index,
        "pub_date": t.pub_date.isoformat(),
        "species": list(t.species),
        "citation": t.citation,
    }


class SemanticQuery(BaseModel):
    concepts: list[str]
    k: int = 20
    exclude_direct: bool = False


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="litgraph", docs_url=None, redoc_url=None)
    # The browser client may be hosted by any static file server, so the
    # API answers cross-origin reads (and their preflights).
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["GET", "POST"],
                       allow_headers=["Content-Type"])

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.http_status,
                            content={"error": {"code": exc.code,
                                               "message": exc.message}})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content={"error": {"code": "bad_request",
                                               "message": str(exc.errors())}})

    def concept_row(concept_id: str, snapshot: SnapshotView) -> dict:
        entry = state.concepts_by_id.get(concept_id)
        total = 0
        if snapshot.has_concept(concept_id):
            total = snapshot.concept_stats(concept_id).total_relations
        return {
            "id": concept_id,
            "name": entry.canonical_name if entry else concept_id,
            "category": entry.category.value if entry else None,
            "total_relations": total,
        }

    @app.get("/v1/concepts")
    def search_concepts(q: str = "", limit: int = 20):
        if not q.strip():
            raise bad_request("query parameter q must be non-empty")
        snapshot = state.snapshot
        needle = q.lower()
        rows = []
        for entry in state.lexicon.enabled_entries():
            haystacks = [entry.canonical_name] + list(entry.synonyms)
            if any(needle in s.lower() for s in haystacks):
                rows.append(concept_row(entry.concept_id, snapshot))
        rows.sort(key=lambda r: (-r["total_relations"], r["id"]))
        return {"results": rows[:max(0, limit)]}

    @app.get("/v1/categories/{category}/concepts")
    def category_concepts(category: str, limit: int = 50, offset: int = 0):
        try:
            wanted = ConceptCategory(category)
        except ValueError:
            raise not_found(f"unknown category {category!r}") from None
        snapshot = state.snapshot
        rows = []
        for entry in state.lexicon.enabled_entries():
            if entry.category is not wanted:
                continue
            if not snapshot.has_concept(entry.concept_id):
                continue
            stats = snapshot.concept_stats(entry.concept_id)
            row = concept_row(entry.concept_id, snapshot)
            row["partner_count"] = stats.partner_count
            rows.append(row)
        rows.sort(key=lambda r: (-r["total_relations"], r["id"]))
        return {"category": wanted.value,
                "results": rows[offset:offset + max(0, limit)]}

    @app.get("/v1/relations/{a}/{b}")
    def relation_detail(a: str, b: str, order: str = "pub_date_asc",
                        limit: int = 50, offset: int = 0):
        snapshot = state.snapshot
        if a == b:
            raise bad_request("a relation needs two distinct concepts")
        if order not in ("pub_date_asc", "pub_date_desc"):
            raise bad_request(f"unknown order {order!r}")
        key = relation_key(a, b)
        try:
            summary = snapshot.summary(key)
            evidence = snapshot.evidence(key, order=order, limit=limit,
                                         offset=offset)
            probabilities = snapshot.conditional_probability(*key)
        except (RelationNotFoundError, ConceptNotFoundError) as exc:
            raise not_found(str(exc)) from None
        # The body is canonical: identical for /relations/x/y and /relations/y/x.
        return {
            "a": key[0],
            "b": key[1],
            "count": summary.count,
            "first_pub_date": summary.first_pub_date.isoformat(),
            "last_pub_date": summary.last_pub_date.isoformat(),
            "p_a_given_b": _probability_payload(probabilities.p_a_given_b),
            "p_b_given_a": _probability_payload(probabilities.p_b_given_a),
            "evidence": [_triple_payload(t) for t in evidence],
        }

    @app.get("/v1/concepts/{concept_id}/related")
    def related_table(concept_id: str, category: Optional[str] = None,
                      sort: str = "count", limit: int = 50, offset: int = 0):
        snapshot = state.snapshot
        if sort not in ("count", "p_a_given_b", "p_b_given_a"):
            raise bad_request(f"unknown sort key {sort!r}")
        if category is not None:
            try:
                ConceptCategory(category)
            except ValueError:
                raise not_found(f"unknown category {category!r}") from None
        try:
            rows = snapshot.related_concepts(concept_id, category_filter=category,
                                             sort_by=sort, limit=limit,
                                             offset=offset)
        except ConceptNotFoundError as exc:
            raise not_found(str(exc)) from None
        out = []
        for row in rows:
            entry = state.concepts_by_id.get(row.concept_id)
            out.append({
                "concept_id": row.concept_id,
                "name": entry.canonical_name if entry else row.concept_id,
                "category": entry.category.value if entry else None,
                "count": row.count,
                "p_a_given_b": _probability_payload(row.p_a_given_b),
                "p_b_given_a": _probability_payload(row.p_b_given_a),
            })
        return {"concept_id": concept_id, "results": out}

    @app.post("/v1/semantic/related")
    def semantic_related(body: SemanticQuery):
        snapshot = state.snapshot
        if not body.concepts:
            raise bad_request("concepts list must be non-empty")
        if body.k < 1:
            raise bad_request("k must be >= 1")
        if snapshot.embedding is None:
            raise bad_request("current snapshot has no embedding; rebuild first")
        try:
            query = combine(body.concepts, snapshot.embedding)
            hits = query_hits(query, body.k, exclude_direct=body.exclude_direct,
                              model=snapshot.embedding, graph=snapshot.graph)
        except ConceptNotFoundError as exc:
            raise not_found(f"unknown or unembedded concepts: "
                            f"{', '.join(exc.concept_ids)}") from None
        except DegenerateQueryError as exc:
            raise ApiError(400, "degenerate_query", str(exc)) from None
        return {
            "sources": list(query.source_concepts),
            "k": body.k,
            "exclude_direct": body.exclude_direct,
            "hits": [{"concept_id": h.concept_id,
                      "score": h.score,
                      "directly_related": h.directly_related} for h in hits],
        }

    @app.get("/v1/stats")
    def stats():
        return state.snapshot.stats_payload()

    @app.post("/v1/admin/update")
    def admin_update():
        building = state.trigger_update()
        return {"accepted": True, "snapshot_building": building}

    return app
