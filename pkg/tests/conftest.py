import random

from subtree_census.graphs import Graph


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.of(n, pairs)


def random_connected_graph(rng: random.Random, n: int, p: float) -> Graph:
    """Random spanning tree plus independent extra edges."""
    pairs = set()
    for v in range(1, n):
        pairs.add((rng.randrange(v), v))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                pairs.add((u, v))
    return Graph.of(n, pairs)


def random_tree(rng: random.Random, n: int) -> Graph:
    return Graph.of(n, [(rng.randrange(v), v) for v in range(1, n)])
