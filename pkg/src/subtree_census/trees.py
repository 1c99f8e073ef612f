"""Labeled-tree utilities: Prüfer codec, exhaustive enumeration, canonical
forms, and an allocation-light subtree DP for sweeps over millions of trees.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, Sequence


def prufer_edges(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    """Edges of the labeled tree on 0..n-1 with Prüfer sequence `seq`."""
    if n < 2:
        if seq:
            raise ValueError("nonempty sequence for a tree with < 2 vertices")
        return []
    if len(seq) != n - 2:
        raise ValueError("sequence length must be n-2")
    deg = [1] * n
    for x in seq:
        deg[x] += 1
    edges = []
    # pointer scan: repeatedly attach the smallest current leaf
    ptr = 0
    leaf = -1
    for x in seq:
        if leaf < 0:
            while deg[ptr] != 1:
                ptr += 1
            leaf = ptr
        edges.append((leaf, x) if leaf < x else (x, leaf))
        deg[leaf] -= 1
        deg[x] -= 1
        if deg[x] == 1 and x < ptr:
            leaf = x
        else:
            leaf = -1
            ptr += 1
    u = -1
    for v in range(n):
        if deg[v] == 1:
            if u < 0:
                u = v
            else:
                edges.append((u, v))
                break
    return edges


def iter_labeled_trees(n: int) -> Iterator[list[tuple[int, int]]]:
    """All n**(n-2) labeled trees on 0..n-1 as edge lists."""
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(0, 1)]
        return
    for seq in product(range(n), repeat=n - 2):
        yield prufer_edges(seq, n)


def adjacency_lists(n: int, edges: Sequence[tuple[int, int]]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def tree_centers(n: int, adj: list[list[int]]) -> list[int]:
    """One or two central vertices, by iterative leaf stripping."""
    if n == 1:
        return [0]
    deg = [len(adj[v]) for v in range(n)]
    layer = [v for v in range(n) if deg[v] == 1]
    removed = len(layer)
    while removed < n:
        nxt = []
        for v in layer:
            for u in adj[v]:
                deg[u] -= 1
                if deg[u] == 1:
                    nxt.append(u)
        removed += len(nxt)
        layer = nxt
    return sorted(layer)


def _rooted_code(root: int, parent: int, adj: list[list[int]]) -> tuple:
    return tuple(sorted(_rooted_code(u, root, adj) for u in adj[root] if u != parent))


def tree_canonical_code(n: int, edges: Sequence[tuple[int, int]]) -> tuple:
    """Label-independent canonical form (AHU encoding rooted at the center)."""
    adj = adjacency_lists(n, edges)
    centers = tree_centers(n, adj)
    if len(centers) == 1:
        return (_rooted_code(centers[0], -1, adj),)
    a, b = centers
    ca = _rooted_code(a, b, adj)
    cb = _rooted_code(b, a, adj)
    return (ca, cb) if ca <= cb else (cb, ca)


def subtree_stats_of_tree(n: int, adj: list[list[int]]) -> tuple[int, int]:
    """(count, total order) of the subtrees of a tree; same DP as
    census.tree_subtree_stats, kept lean for tight enumeration loops."""
    if n == 1:
        return 1, 1
    parent = [-1] * n
    order = [0]
    parent[0] = 0
    for v in order:
        for u in adj[v]:
            if parent[u] == -1:
                parent[u] = v
                order.append(u)
    f = [1] * n
    g = [1] * n
    for v in reversed(order):
        children = [u for u in adj[v] if parent[u] == v]
        if not children:
            continue
        prod = 1
        for c in children:
            prod *= 1 + f[c]
        f[v] = prod
        total = prod
        for c in children:
            total += g[c] * (prod // (1 + f[c]))
        g[v] = total
    return sum(f), sum(g)
