import threading
import time
from datetime import date

import numpy as np
import pytest
from fastapi.testclient import TestClient

from litgraph.embedding import EmbeddingModel
from litgraph.graph import build_graph
from litgraph.service import ServiceState, create_app
from litgraph.store import Store

from conftest import make_lexicon, make_triple

LEXICON_SPEC = [
    ("alzheimers", ["Alzheimer's disease", "senile dementia"], "brain_disease"),
    ("dopamine", ["dopamine"], "neurotransmitter"),
    ("hippocampus", ["hippocampus"], "brain_region"),
    ("memory", ["memory"], "cognitive_function"),
    ("pfc", ["prefrontal cortex"], "brain_region"),
    ("unmentioned", ["unmentioned thing"], "pathway"),
]


def category_map():
    return {cid: cat for cid, _, cat in LEXICON_SPEC}


def corpus_store():
    store = Store(categories=category_map())
    store.insert_triples([
        make_triple("hippocampus", "memory", article_id="a1", sentence_index=0,
                    pub_date=date(2020, 3, 1), citation="Smith 2020",
                    species=("human",), sentence="Hippocampus stores memory."),
        make_triple("alzheimers", "memory", article_id="a1", sentence_index=1,
                    pub_date=date(2020, 3, 1), citation="Smith 2020"),
        make_triple("hippocampus", "memory", article_id="a2", sentence_index=0,
                    pub_date=date(2019, 7, 1), citation="Lee 2019"),
        make_triple("dopamine", "pfc", article_id="a2", sentence_index=1,
                    pub_date=date(2019, 7, 1)),
        make_triple("memory", "pfc", article_id="a3", sentence_index=0,
                    pub_date=date(2021, 1, 5)),
    ])
    return store


def embedding_for(store):
    rng = np.random.default_rng(8)
    names = sorted({c for key in store.relation_keys() for c in key})
    return EmbeddingModel(names, rng.normal(size=(len(names), 6)), seed=8)


def make_state(with_embedding=True, update_runner=None):
    lexicon = make_lexicon(LEXICON_SPEC)
    store = corpus_store()
    embedding = embedding_for(store) if with_embedding else None
    graph = build_graph(store) if with_embedding else None
    snapshot = store.publish_snapshot(embedding=embedding, graph=graph)
    return ServiceState(lexicon, snapshot, update_runner)


@pytest.fixture
def client():
    return TestClient(create_app(make_state()))


class TestSearch:
    def test_matches_canonical_names_and_synonyms(self, client):
        body = client.get("/v1/concepts", params={"q": "dement"}).json()
        assert [r["id"] for r in body["results"]] == ["alzheimers"]

    def test_case_insensitive_substring(self, client):
        body = client.get("/v1/concepts", params={"q": "HIPPO"}).json()
        assert body["results"][0]["id"] == "hippocampus"

    def test_rows_carry_name_category_and_totals(self, client):
        body = client.get("/v1/concepts", params={"q": "memory"}).json()
        (row,) = body["results"]
        assert row == {"id": "memory", "name": "memory",
                       "category": "cognitive_function", "total_relations": 4}

    def test_sorted_by_relation_total_then_id(self, client):
        body = client.get("/v1/concepts", params={"q": "e"}).json()
        rows = body["results"]
        keys = [(-r["total_relations"], r["id"]) for r in rows]
        assert keys == sorted(keys)

    def test_concept_without_relations_shows_zero(self, client):
        body = client.get("/v1/concepts", params={"q": "unmentioned"}).json()
        assert body["results"][0]["total_relations"] == 0

    def test_blank_query_is_bad_request(self, client):
        resp = client.get("/v1/concepts", params={"q": "  "})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "bad_request"

    def test_missing_query_is_bad_request(self, client):
        assert client.get("/v1/concepts").status_code == 400

    def test_limit_respected(self, client):
        body = client.get("/v1/concepts", params={"q": "e", "limit": 2}).json()
        assert len(body["results"]) == 2


class TestCategoryListing:
    def test_only_concepts_with_relations_listed(self, client):
        body = client.get("/v1/categories/brain_region/concepts").json()
        assert [r["id"] for r in body["results"]] == ["hippocampus", "pfc"]
        assert body["results"][0]["partner_count"] == 1

    def test_unknown_category_404(self, client):
        resp = client.get("/v1/categories/made_up/concepts")
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "not_found"

    def test_pagination_stable(self, client):
        full = client.get("/v1/categories/brain_region/concepts").json()["results"]
        page1 = client.get("/v1/categories/brain_region/concepts",
                           params={"limit": 1}).json()["results"]
        page2 = client.get("/v1/categories/brain_region/concepts",
                           params={"limit": 1, "offset": 1}).json()["results"]
        assert page1 + page2 == full


class TestRelationDetail:
    def test_body_fields(self, client):
        body = client.get("/v1/relations/hippocampus/memory").json()
        assert body["a"] == "hippocampus"
        assert body["b"] == "memory"
        assert body["count"] == 2
        assert body["first_pub_date"] == "2019-07-01"
        assert body["last_pub_date"] == "2020-03-01"
        # count 2; total(memory) = 4, total(hippocampus) = 2.
        assert body["p_a_given_b"] == {"display": "0.5", "numerator": 1,
                                       "denominator": 2}
        assert body["p_b_given_a"] == {"display": "1", "numerator": 1,
                                       "denominator": 1}

    def test_both_orientations_identical(self, client):
        one = client.get("/v1/relations/hippocampus/memory").json()
        two = client.get("/v1/relations/memory/hippocampus").json()
        assert one == two

    def test_evidence_payload_and_order(self, client):
        body = client.get("/v1/relations/hippocampus/memory").json()
        ev = body["evidence"]
        assert [e["article_id"] for e in ev] == ["a2", "a1"]
        assert ev[1] == {
            "article_id": "a1", "sentence": "Hippocampus stores memory.",
            "sentence_index": 0, "pub_date": "2020-03-01",
            "species": ["human"], "citation": "Smith 2020"}

    def test_descending_order(self, client):
        body = client.get("/v1/relations/hippocampus/memory",
                          params={"order": "pub_date_desc"}).json()
        assert [e["article_id"] for e in body["evidence"]] == ["a1", "a2"]

    def test_bad_order_rejected(self, client):
        resp = client.get("/v1/relations/hippocampus/memory",
                          params={"order": "newest"})
        assert resp.status_code == 400

    def test_same_concept_twice_rejected(self, client):
        assert client.get("/v1/relations/memory/memory").status_code == 400

    def test_unknown_relation_404(self, client):
        resp = client.get("/v1/relations/dopamine/alzheimers")
        assert resp.status_code == 404

    def test_evidence_pagination(self, client):
        full = client.get("/v1/relations/hippocampus/memory").json()["evidence"]
        page = client.get("/v1/relations/hippocampus/memory",
                          params={"limit": 1, "offset": 1}).json()["evidence"]
        assert page == full[1:2]


class TestRelatedTable:
    def test_rows_enriched_with_lexicon_data(self, client):
        body = client.get("/v1/concepts/memory/related").json()
        assert body["concept_id"] == "memory"
        ids = [r["concept_id"] for r in body["results"]]
        assert ids == ["hippocampus", "alzheimers", "pfc"]
        row = body["results"][0]
        assert row["name"] == "hippocampus"
        assert row["category"] == "brain_region"
        assert row["count"] == 2
        assert row["p_a_given_b"]["display"] == "1"

    def test_category_filter(self, client):
        body = client.get("/v1/concepts/memory/related",
                          params={"category": "brain_region"}).json()
        assert [r["concept_id"] for r in body["results"]] == [
            "hippocampus", "pfc"]

    def test_unknown_category_404(self, client):
        resp = client.get("/v1/concepts/memory/related",
                          params={"category": "nope"})
        assert resp.status_code == 404

    def test_sort_validation(self, client):
        resp = client.get("/v1/concepts/memory/related", params={"sort": "x"})
        assert resp.status_code == 400

    def test_unknown_concept_404(self, client):
        assert client.get("/v1/concepts/zzz/related").status_code == 404

    def test_sort_by_probability(self, client):
        body = client.get("/v1/concepts/memory/related",
                          params={"sort": "p_b_given_a"}).json()
        shares = [r["p_b_given_a"]["numerator"] / r["p_b_given_a"]["denominator"]
                  for r in body["results"]]
        assert shares == sorted(shares, reverse=True)


class TestSemanticQuery:
    def test_hits_ranked_and_flagged(self, client):
        body = client.post("/v1/semantic/related",
                           json={"concepts": ["memory"], "k": 4}).json()
        assert body["sources"] == ["memory"]
        assert body["k"] == 4
        assert len(body["hits"]) == 4
        scores = [h["score"] for h in body["hits"]]
        assert scores == sorted(scores, reverse=True)
        flags = {h["concept_id"]: h["directly_related"] for h in body["hits"]}
        assert flags["hippocampus"] is True
        assert flags["dopamine"] is False

    def test_multi_concept_query(self, client):
        body = client.post("/v1/semantic/related",
                           json={"concepts": ["memory", "dopamine"]}).json()
        assert body["sources"] == ["memory", "dopamine"]
        names = {h["concept_id"] for h in body["hits"]}
        assert names.isdisjoint({"memory", "dopamine"})

    def test_exclude_direct(self, client):
        body = client.post("/v1/semantic/related",
                           json={"concepts": ["memory"], "k": 4,
                                 "exclude_direct": True}).json()
        assert all(not h["directly_related"] for h in body["hits"])
        assert {h["concept_id"] for h in body["hits"]} == {"dopamine"}

    def test_unknown_concept_404_lists_names(self, client):
        resp = client.post("/v1/semantic/related",
                           json={"concepts": ["zzz", "memory", "aaa"]})
        assert resp.status_code == 404
        message = resp.json()["error"]["message"]
        assert "aaa" in message and "zzz" in message

    def test_empty_concepts_rejected(self, client):
        resp = client.post("/v1/semantic/related", json={"concepts": []})
        assert resp.status_code == 400

    def test_bad_k_rejected(self, client):
        resp = client.post("/v1/semantic/related",
                           json={"concepts": ["memory"], "k": 0})
        assert resp.status_code == 400

    def test_malformed_body_is_bad_request_not_422(self, client):
        resp = client.post("/v1/semantic/related", json={"k": 3})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "bad_request"

    def test_no_embedding_means_bad_request(self):
        client = TestClient(create_app(make_state(with_embedding=False)))
        resp = client.post("/v1/semantic/related", json={"concepts": ["memory"]})
        assert resp.status_code == 400


class TestStats:
    def test_counts(self, client):
        body = client.get("/v1/stats").json()
        assert body["concepts"] == 5
        assert body["relations"] == 4
        assert body["triples"] == 5
        assert body["articles"] == 3
        assert body["snapshot_id"] == 1
        assert body["last_update"]


class TestCrossOrigin:
    def test_reads_are_allowed_from_any_origin(self, client):
        res = client.get("/v1/stats", headers={"Origin": "http://ui.example"})
        assert res.status_code == 200
        assert res.headers["access-control-allow-origin"] == "*"

    def test_preflight_for_json_post(self, client):
        res = client.options("/v1/semantic/related", headers={
            "Origin": "http://ui.example",
            "Access-Control-Request-Method": "POST",
            "Access-Control-Request-Headers": "Content-Type",
        })
        assert res.status_code == 200
        assert "POST" in res.headers["access-control-allow-methods"]


class TestAdminUpdate:
    def test_no_runner_configured_is_bad_request(self, client):
        assert client.post("/v1/admin/update").status_code == 400

    def test_update_swaps_snapshot(self):
        store = corpus_store()
        first = store.publish_snapshot(embedding=embedding_for(store),
                                       graph=build_graph(store))

        def runner():
            store.insert_triples([make_triple("dopamine", "memory",
                                              article_id="new1")])
            return store.publish_snapshot(embedding=embedding_for(store))

        state = ServiceState(make_lexicon(LEXICON_SPEC), first, runner)
        client = TestClient(create_app(state))
        before = client.get("/v1/stats").json()
        resp = client.post("/v1/admin/update")
        assert resp.status_code == 200
        body = resp.json()
        assert body["accepted"] is True
        assert body["snapshot_building"] == before["snapshot_id"] + 1
        state.wait_for_update(10)
        after = client.get("/v1/stats").json()
        assert after["triples"] == before["triples"] + 1
        assert after["snapshot_id"] == before["snapshot_id"] + 1

    def test_second_trigger_while_building_is_409(self):
        release = threading.Event()

        def slow_runner():
            release.wait(5)
            store = corpus_store()
            return store.publish_snapshot(embedding=embedding_for(store))

        state = make_state(update_runner=slow_runner)
        client = TestClient(create_app(state))
        assert client.post("/v1/admin/update").status_code == 200
        resp = client.post("/v1/admin/update")
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "updating"
        release.set()
        state.wait_for_update(10)
        # After completion a new trigger is accepted again.
        assert client.post("/v1/admin/update").status_code == 200
        state.wait_for_update(10)

    def test_failed_update_records_error_and_releases_lock(self):
        def failing_runner():
            raise RuntimeError("boom")

        state = make_state(update_runner=failing_runner)
        client = TestClient(create_app(state))
        before = client.get("/v1/stats").json()
        assert client.post("/v1/admin/update").status_code == 200
        state.wait_for_update(10)
        assert "boom" in state.last_update_error
        assert client.get("/v1/stats").json() == before
        assert client.post("/v1/admin/update").status_code == 200
        state.wait_for_update(10)
