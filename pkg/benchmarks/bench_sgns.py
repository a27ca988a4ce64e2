"""Training-kernel benchmark: compiled extension vs pure-Python fallback.

Both kernels implement the identical update schedule and RNG stream, so
besides throughput this also asserts that the resulting matrices are
bitwise equal. Run with:

    python3 benchmarks/bench_sgns.py [--nodes 60] [--epochs 3]
"""

import argparse
import sys
import time

from litgraph.graph import graph_from_weighted_pairs
from litgraph.rng import SplitMix64
from litgraph.sgns import COMPILED_AVAILABLE, SGNSConfig, train_embeddings
from litgraph.walks import WalkConfig, generate_walks


def build_walk_corpus(n_nodes: int, seed: int) -> list:
    """Random connected graph (spine + chords), then standard walks."""
    rng = SplitMix64(seed)
    edges = []
    for i in range(1, n_nodes):
        edges.append((f"n{i:03d}", f"n{rng.randbelow(i):03d}", 1))
    for _ in range(n_nodes * 2):
        a, b = rng.randbelow(n_nodes), rng.randbelow(n_nodes)
        if a != b:
            edges.append((f"n{a:03d}", f"n{b:03d}", 1 + rng.randbelow(3)))
    graph = graph_from_weighted_pairs(edges)
    walks = generate_walks(graph, WalkConfig(walk_length=40, walks_per_node=6,
                                             seed=seed))
    return walks


def run(backend: str, walks: list, cfg: SGNSConfig):
    started = time.perf_counter()
    model = train_embeddings(walks, cfg, backend=backend)
    elapsed = time.perf_counter() - started
    tokens = sum(len(w) for w in walks) * cfg.epochs
    return model, elapsed, tokens


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=60)
    parser.add_argument("--epochs", type=int, default=3)
    parser.add_argument("--dimension", type=int, default=64)
    parser.add_argument("--seed", type=int, default=12)
    args = parser.parse_args()

    walks = build_walk_corpus(args.nodes, args.seed)
    cfg = SGNSConfig(dimension=args.dimension, epochs=args.epochs,
                     seed=args.seed)
    print(f"corpus: {len(walks)} walks, "
          f"{sum(len(w) for w in walks)} tokens, dim={cfg.dimension}, "
          f"epochs={cfg.epochs}")

    pure_model, pure_s, tokens = run("pure", walks, cfg)
    print(f"pure     {pure_s:8.2f}s  {tokens / pure_s:10.0f} tokens/s")

    if not COMPILED_AVAILABLE:
        print("compiled kernel not built; skipping comparison")
        return 0

    comp_model, comp_s, _ = run("compiled", walks, cfg)
    print(f"compiled {comp_s:8.2f}s  {tokens / comp_s:10.0f} tokens/s")
    print(f"speedup  {pure_s / comp_s:8.1f}x")

    if pure_model.matrix.tobytes() != comp_model.matrix.tobytes():
        print("ERROR: kernels diverged; matrices are not bitwise equal")
        return 1
    print("matrices bitwise identical across kernels")
    return 0


if __name__ == "__main__":
    sys.exit(main())
