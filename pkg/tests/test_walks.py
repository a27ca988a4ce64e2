import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats as scipy_stats

from litgraph.errors import ConfigError, InsufficientDataError
from litgraph.graph import graph_from_weighted_pairs
from litgraph.rng import SplitMix64
from litgraph.walks import (
    AliasTable,
    WalkConfig,
    WalkSampler,
    generate_walks,
    step_biases,
    step_distribution,
)


def triangle():
    return graph_from_weighted_pairs([("a", "b", 1), ("b", "c", 1), ("a", "c", 1)])


def path3():
    return graph_from_weighted_pairs([("a", "b", 1), ("b", "c", 1)])


def star_plus_ring(n=12):
    """Hub connected to every ring node; ring neighbors also connected."""
    edges = []
    for i in range(n):
        edges.append(("hub", f"n{i:02d}", 1 + (i % 3)))
        edges.append((f"n{i:02d}", f"n{(i + 1) % n:02d}", 1))
    return graph_from_weighted_pairs(edges)


CFG = WalkConfig()  # p = q = 0.25


class TestConfig:
    def test_defaults(self):
        assert (CFG.p, CFG.q) == (0.25, 0.25)
        assert CFG.walk_length == 80
        assert CFG.walks_per_node == 18

    @pytest.mark.parametrize("bad", [
        dict(p=0.0), dict(q=-1.0), dict(walk_length=0), dict(walks_per_node=0)])
    def test_validation(self, bad):
        with pytest.raises(ConfigError):
            WalkConfig(**bad).validate()


class TestStepDistribution:
    def test_triangle_return_probability(self):
        g = triangle()
        prev, cur = g.node_id("a"), g.node_id("b")
        dist = step_distribution(g, prev, cur, CFG)
        nbrs = list(g.neighbors[cur])
        # From b with prev a: a gets bias 1/p = 4, c is adjacent to a so 1.
        expected = {g.node_id("a"): 4 / 5, g.node_id("c"): 1 / 5}
        for x, prob in zip(nbrs, dist):
            assert abs(prob - expected[x]) < 1e-12

    def test_path_return_probability(self):
        g = path3()
        prev, cur = g.node_id("a"), g.node_id("b")
        dist = step_distribution(g, prev, cur, CFG)
        nbrs = list(g.neighbors[cur])
        # From b with prev a: a gets 1/p = 4, c is NOT adjacent to a so 1/q = 4.
        expected = {g.node_id("a"): 1 / 2, g.node_id("c"): 1 / 2}
        for x, prob in zip(nbrs, dist):
            assert abs(prob - expected[x]) < 1e-12

    def test_first_step_follows_edge_weights(self):
        g = graph_from_weighted_pairs([("a", "b", 3), ("a", "c", 1)])
        dist = step_distribution(g, None, g.node_id("a"), CFG)
        by_node = dict(zip(g.neighbors[g.node_id("a")], dist))
        assert abs(by_node[g.node_id("b")] - 0.75) < 1e-12
        assert abs(by_node[g.node_id("c")] - 0.25) < 1e-12

    def test_edge_weights_multiply_biases(self):
        g = graph_from_weighted_pairs([("a", "b", 1), ("b", "c", 5)])
        prev, cur = g.node_id("a"), g.node_id("b")
        biases = step_biases(g, prev, cur, 0.25, 0.25)
        by_node = dict(zip(g.neighbors[cur], biases))
        assert by_node[g.node_id("a")] == 4.0   # 1 * (1/p)
        assert by_node[g.node_id("c")] == 20.0  # 5 * (1/q)

    def test_distribution_sums_to_one(self):
        g = star_plus_ring()
        for cur in range(g.node_count):
            for prev in [None] + list(g.neighbors[cur][:2]):
                dist = step_distribution(
                    g, int(prev) if prev is not None else None, cur, CFG)
                assert abs(dist.sum() - 1.0) < 1e-12
                assert (dist >= 0).all()

    def test_p_controls_return_tendency(self):
        g = path3()
        prev, cur = g.node_id("a"), g.node_id("b")
        eager = step_distribution(g, prev, cur, WalkConfig(p=0.25, q=1.0))
        averse = step_distribution(g, prev, cur, WalkConfig(p=4.0, q=1.0))
        pos_a = list(g.neighbors[cur]).index(g.node_id("a"))
        assert eager[pos_a] > averse[pos_a]

    def test_isolated_node_rejected(self):
        g = graph_from_weighted_pairs([("a", "b", 1)])
        g.nodes = g.nodes + ("z",)
        g.neighbors.append(np.array([], dtype=np.int64))
        g.weights.append(np.array([], dtype=np.float64))
        with pytest.raises(InsufficientDataError):
            step_biases(g, None, 2, 0.25, 0.25)


class TestAliasTable:
    def test_uniform_weights_sample_everything(self):
        table = AliasTable(np.ones(5))
        rng = SplitMix64(3)
        seen = {table.sample(rng) for _ in range(500)}
        assert seen == set(range(5))

    def test_empirical_matches_weights(self):
        weights = np.array([1.0, 2.0, 7.0])
        table = AliasTable(weights)
        rng = SplitMix64(11)
        n = 100_000
        counts = Counter(table.sample(rng) for _ in range(n))
        target = weights / weights.sum()
        for i, expected in enumerate(target):
            assert abs(counts[i] / n - expected) < 0.01

    def test_zero_total_rejected(self):
        with pytest.raises(ConfigError):
            AliasTable(np.zeros(3))
        with pytest.raises(ConfigError):
            AliasTable(np.array([]))


def empirical_next_step(sampler, graph, prev_name, cur_name, n, seed=5):
    rng = SplitMix64(seed)
    prev, cur = graph.node_id(prev_name), graph.node_id(cur_name)
    counts = Counter(sampler.next_step(prev, cur, rng) for _ in range(n))
    return {graph.nodes[i]: c / n for i, c in counts.items()}


class TestSamplers:
    def test_monte_carlo_matches_distribution_alias(self):
        g = star_plus_ring()
        cfg = WalkConfig()  # tiny graph stays under the alias budget
        sampler = WalkSampler(g, cfg)
        assert sampler.uses_alias_tables
        self._check_frequencies(g, sampler, cfg)

    def test_monte_carlo_matches_distribution_rejection(self):
        g = star_plus_ring()
        cfg = WalkConfig(alias_edge_budget=0)  # force rejection sampling
        sampler = WalkSampler(g, cfg)
        assert not sampler.uses_alias_tables
        self._check_frequencies(g, sampler, cfg)

    @staticmethod
    def _check_frequencies(g, sampler, cfg, n=100_000):
        prev, cur = g.node_id("hub"), g.node_id("n00")
        dist = step_distribution(g, prev, cur, cfg)
        freq = empirical_next_step(sampler, g, "hub", "n00", n)
        for pos, x in enumerate(g.neighbors[cur]):
            assert abs(freq.get(g.nodes[x], 0.0) - dist[pos]) < 0.01

    def test_uniform_case_passes_chi_square(self):
        # With p = q = 1 and unit weights, next-step must be uniform.
        g = triangle()
        cfg = WalkConfig(p=1.0, q=1.0)
        sampler = WalkSampler(g, cfg)
        rng = SplitMix64(17)
        prev, cur = g.node_id("a"), g.node_id("b")
        n = 30_000
        counts = Counter(sampler.next_step(prev, cur, rng) for _ in range(n))
        observed = [counts[int(x)] for x in g.neighbors[cur]]
        _, p_value = scipy_stats.chisquare(observed)
        assert p_value > 0.01

    def test_alias_and_rejection_agree_distributionally(self):
        g = star_plus_ring()
        a = WalkSampler(g, WalkConfig())
        r = WalkSampler(g, WalkConfig(alias_edge_budget=0))
        fa = empirical_next_step(a, g, "n01", "n02", 50_000, seed=1)
        fr = empirical_next_step(r, g, "n01", "n02", 50_000, seed=2)
        for name in set(fa) | set(fr):
            assert abs(fa.get(name, 0.0) - fr.get(name, 0.0)) < 0.015


class TestGenerateWalks:
    def test_shapes_and_node_names(self):
        g = star_plus_ring()
        cfg = WalkConfig(walk_length=10, walks_per_node=3, seed=9)
        walks = generate_walks(g, cfg)
        assert len(walks) == g.node_count * 3
        for walk in walks:
            assert 1 <= len(walk) <= 10
            for name in walk:
                assert name in g.index

    def test_steps_follow_edges(self):
        g = star_plus_ring()
        walks = generate_walks(g, WalkConfig(walk_length=8, walks_per_node=2))
        for walk in walks:
            for a, b in zip(walk, walk[1:]):
                assert g.has_edge(g.node_id(a), g.node_id(b))

    def test_each_pass_starts_every_node_once(self):
        g = triangle()
        cfg = WalkConfig(walk_length=4, walks_per_node=5)
        walks = generate_walks(g, cfg)
        for round_no in range(5):
            starts = sorted(w[0] for w in walks[round_no * 3:(round_no + 1) * 3])
            assert starts == ["a", "b", "c"]

    def test_deterministic_for_fixed_seed(self):
        g = star_plus_ring()
        cfg = WalkConfig(walk_length=12, walks_per_node=4, seed=33)
        assert generate_walks(g, cfg) == generate_walks(g, cfg)

    def test_seed_changes_walks(self):
        g = star_plus_ring()
        w1 = generate_walks(g, WalkConfig(walk_length=12, walks_per_node=2, seed=1))
        w2 = generate_walks(g, WalkConfig(walk_length=12, walks_per_node=2, seed=2))
        assert w1 != w2

    def test_walk_content_independent_of_visit_order(self):
        """The walk started at a given node in a given pass is a pure
        function of (seed, pass, node), so collecting walks by start node
        yields identical sets regardless of shuffle order."""
        g = star_plus_ring()
        c1 = WalkConfig(walk_length=10, walks_per_node=2, seed=4)
        walks = generate_walks(g, c1)
        per_start = {}
        for w in walks:
            per_start.setdefault(w[0], []).append(w)
        again = generate_walks(g, c1)
        per_start_2 = {}
        for w in again:
            per_start_2.setdefault(w[0], []).append(w)
        assert per_start == per_start_2

    def test_empty_graph_rejected(self):
        with pytest.raises(InsufficientDataError):
            generate_walks(graph_from_weighted_pairs([]), WalkConfig())

    def test_return_heavy_walks_revisit_start(self):
        # p = 0.05 makes returning ~20x more likely; the start node should
        # dominate positions 0, 2, 4, ... of walks on a path graph.
        g = path3()
        cfg = WalkConfig(p=0.05, q=1.0, walk_length=40, walks_per_node=10, seed=2)
        walks = [w for w in generate_walks(g, cfg) if w[0] == "a" and len(w) >= 10]
        revisits = sum(w[2] == "a" for w in walks) / len(walks)
        assert revisits > 0.7
