import numpy as np
import pytest

from litgraph.errors import ConceptNotFoundError, InsufficientDataError
from litgraph.graph import build_graph, graph_from_weighted_pairs
from litgraph.store import Store

from conftest import make_triple


def fixture_store():
    store = Store()
    store.insert_triples([
        make_triple("a", "b", article_id="x", sentence_index=0),
        make_triple("a", "b", article_id="x", sentence_index=1),
        make_triple("a", "b", article_id="y", sentence_index=0),
        make_triple("b", "c", article_id="y", sentence_index=1),
        make_triple("a", "c", article_id="z", sentence_index=0),
        make_triple("c", "d", article_id="z", sentence_index=1),
    ])
    return store


def test_nodes_sorted_and_indexed():
    g = build_graph(fixture_store())
    assert g.nodes == ("a", "b", "c", "d")
    assert [g.node_id(n) for n in g.nodes] == [0, 1, 2, 3]


def test_edge_weight_is_triple_count():
    g = build_graph(fixture_store())
    assert g.edge_weight(g.node_id("a"), g.node_id("b")) == 3.0
    assert g.edge_weight(g.node_id("b"), g.node_id("c")) == 1.0
    assert g.edge_weight(g.node_id("a"), g.node_id("d")) == 0.0


def test_adjacency_is_symmetric_and_sorted():
    g = build_graph(fixture_store())
    for i in range(g.node_count):
        nbrs = g.neighbors[i]
        assert list(nbrs) == sorted(nbrs)
        for j in nbrs:
            assert g.has_edge(j, i)
            assert g.edge_weight(i, j) == g.edge_weight(j, i)


def test_edge_count_and_degree():
    g = build_graph(fixture_store())
    assert g.edge_count == 4
    assert g.degree(g.node_id("a")) == 2
    assert g.degree(g.node_id("c")) == 3
    assert g.degree(g.node_id("d")) == 1


def test_total_weight_sums_incident_edges():
    g = build_graph(fixture_store())
    assert g.total_weight(g.node_id("a")) == 4.0


def test_min_count_filters_weak_edges_and_orphaned_nodes():
    g = build_graph(fixture_store(), min_count=2)
    assert g.nodes == ("a", "b")
    assert g.edge_count == 1


def test_min_count_below_one_rejected():
    with pytest.raises(InsufficientDataError):
        build_graph(fixture_store(), min_count=0)


def test_whitelist_requires_both_endpoints():
    g = build_graph(fixture_store(), node_whitelist=["a", "b", "d"])
    assert g.nodes == ("a", "b")
    assert g.edge_count == 1


def test_unknown_node_raises():
    g = build_graph(fixture_store())
    with pytest.raises(ConceptNotFoundError):
        g.node_id("nope")


def test_neighbor_names():
    g = build_graph(fixture_store())
    assert g.neighbor_names("c") == ["a", "b", "d"]


def test_graph_from_weighted_pairs_directly():
    g = graph_from_weighted_pairs([("x", "y", 2.5), ("y", "z", 1.0)])
    assert g.nodes == ("x", "y", "z")
    assert g.edge_weight(0, 1) == 2.5
    assert g.neighbors[1].dtype == np.int64
    assert g.weights[1].dtype == np.float64


def test_empty_graph():
    g = graph_from_weighted_pairs([])
    assert g.nodes == ()
    assert g.edge_count == 0
