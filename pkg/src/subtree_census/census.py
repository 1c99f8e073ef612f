"""Exact subtree statistics of small graphs by several independent methods.

A subtree is a subgraph that is a tree; single vertices count, the empty
graph does not.  Three routes to the same numbers:

* `subtree_stats_bruteforce` - every vertex subset, spanning trees listed
  explicitly by edge backtracking.
* `subtree_stats_kirchhoff` - connected vertex subsets enumerated by
  recursive extension, spanning trees counted by an integer determinant.
* `tree_subtree_stats` - linear rooted dynamic program, trees only.

`marked_census` partitions the statistics by which marked vertices and how
many tracked edges each subtree contains; `attach_pendant_stars` turns a
census over hub vertices into exact statistics for the graph with pendant
stars attached at the hubs, without ever materializing the leaves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, NamedTuple

from .errors import InvariantViolation, NotATreeError, TooLargeError
from .graphs import Edge, Graph, VertexSet, edge
from .trees import subtree_stats_of_tree

BRUTE_MAX = 12
CENSUS_MAX = 22
SPANNING_MAX = 40
MARKED_MAX = 6

# Pendant-star counts enter the statistics only through 2**s; refuse
# exponents whose power would not fit in this many bits.
EXPONENT_CAP = 1 << 20


@dataclass(frozen=True)
class SubtreeStats:
    """Pair (number of subtrees, sum of their orders)."""

    count: int
    total_order: int

    def __add__(self, other: "SubtreeStats") -> "SubtreeStats":
        return SubtreeStats(self.count + other.count, self.total_order + other.total_order)

    def __sub__(self, other: "SubtreeStats") -> "SubtreeStats":
        c = self.count - other.count
        t = self.total_order - other.total_order
        if c < 0 or t < 0:
            raise InvariantViolation("subtree statistics went negative")
        return SubtreeStats(c, t)

    def mean(self) -> Fraction:
        return mean(self)


ZERO_STATS = SubtreeStats(0, 0)


def mean(stats: SubtreeStats) -> Fraction:
    """Exact mean subtree order."""
    if stats.count <= 0:
        raise ValueError("mean of an empty subtree family")
    return Fraction(stats.total_order, stats.count)


def density(stats: SubtreeStats, n: int) -> Fraction:
    """Mean subtree order divided by the graph order n."""
    if n <= 0:
        raise ValueError("density needs a positive graph order")
    return mean(stats) / n


class Subtree(NamedTuple):
    vertices: frozenset[int]
    edges: frozenset[Edge]


# ---------------------------------------------------------------------------
# Connected-subset enumeration (recursive extension with a forbidden set;
# every connected subset is produced exactly once, anchored at its minimum
# vertex).

def _iter_connected_masks(adj: tuple[int, ...], n: int) -> Iterator[int]:
    for v in range(n):
        root = 1 << v
        below = root - 1
        stack = [(root, adj[v] & ~(root | below), below)]
        while stack:
            s, ext, forb = stack.pop()
            yield s
            banned = 0
            cand = ext
            while cand:
                u = cand & -cand
                cand ^= u
                s2 = s | u
                forb2 = forb | banned
                ext2 = (ext | adj[u.bit_length() - 1]) & ~(forb2 | s2)
                stack.append((s2, ext2, forb2))
                banned |= u


def iter_connected_subsets(g: Graph) -> Iterator[VertexSet]:
    """All nonempty connected vertex subsets, each exactly once."""
    n = g.order
    for mask in _iter_connected_masks(g.adjacency, n):
        yield frozenset(v for v in range(n) if mask >> v & 1)


def _mask_vertices(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def _mask_connected(adj: tuple[int, ...], mask: int) -> bool:
    if mask == 0:
        return False
    seen = mask & -mask
    frontier = seen
    while frontier:
        nxt = 0
        m = frontier
        while m:
            b = m & -m
            m ^= b
            nxt |= adj[b.bit_length() - 1]
        frontier = nxt & mask & ~seen
        seen |= frontier
    return seen == mask


# ---------------------------------------------------------------------------
# Fraction-free (Bareiss) determinant over exact integers.

def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            mik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _tau_mask(g: Graph, mask: int, weights: dict[Edge, int] | None = None) -> int:
    """Spanning-tree count of the induced subgraph on `mask`.

    With `weights`, returns the weighted count sum_T prod_{e in T} w(e)
    (Matrix-Tree with edge weights); unweighted edges have weight 1.
    """
    vs = _mask_vertices(mask)
    k = len(vs)
    if k == 1:
        return 1
    idx = {v: i for i, v in enumerate(vs)}
    lap = [[0] * k for _ in range(k)]
    adj = g.adjacency
    for i, u in enumerate(vs):
        m = adj[u] & mask
        while m:
            b = m & -m
            m ^= b
            v = b.bit_length() - 1
            if v < u:
                continue
            j = idx[v]
            w = 1 if weights is None else weights.get((u, v), 1)
            if w == 0:
                continue
            lap[i][i] += w
            lap[j][j] += w
            lap[i][j] -= w
            lap[j][i] -= w
    minor = [row[1:] for row in lap[1:]]
    return _bareiss_det(minor)


def spanning_tree_count(g: Graph) -> int:
    """Number of spanning trees; 0 for disconnected input."""
    if g.order > SPANNING_MAX:
        raise TooLargeError(f"spanning tree count capped at {SPANNING_MAX} vertices")
    if g.order == 0:
        return 0
    full = (1 << g.order) - 1
    if not _mask_connected(g.adjacency, full):
        return 0
    return _tau_mask(g, full)


# ---------------------------------------------------------------------------
# Subtree statistics

def subtree_stats_kirchhoff(g: Graph) -> SubtreeStats:
    """Sum spanning-tree counts over all connected vertex subsets."""
    if g.order > CENSUS_MAX:
        raise TooLargeError(f"census capped at {CENSUS_MAX} vertices")
    count = 0
    total = 0
    for mask in _iter_connected_masks(g.adjacency, g.order):
        tau = _tau_mask(g, mask)
        count += tau
        total += tau * bin(mask).count("1")
    return SubtreeStats(count, total)


def _iter_spanning_trees(k: int, edges_in: list[tuple[int, int]]) -> Iterator[tuple[tuple[int, int], ...]]:
    """All spanning trees of a k-vertex graph given as a local edge list."""
    need = k - 1
    if need == 0:
        yield ()
        return

    def rec(idx: int, parent: list[int], chosen: list[tuple[int, int]]) -> Iterator[tuple[tuple[int, int], ...]]:
        if len(chosen) == need:
            yield tuple(chosen)
            return
        if len(edges_in) - idx < need - len(chosen):
            return
        u, v = edges_in[idx]
        ru, rv = u, v
        while parent[ru] != ru:
            ru = parent[ru]
        while parent[rv] != rv:
            rv = parent[rv]
        if ru != rv:
            p2 = parent.copy()
            p2[ru] = rv
            chosen.append((u, v))
            yield from rec(idx + 1, p2, chosen)
            chosen.pop()
        yield from rec(idx + 1, parent, chosen)

    yield from rec(0, list(range(k)), [])


def enumerate_subtrees(g: Graph) -> Iterator[Subtree]:
    """Explicitly list every subtree (vertex set, edge set). Brute force."""
    if g.order > BRUTE_MAX:
        raise TooLargeError(f"subtree enumeration capped at {BRUTE_MAX} vertices")
    n = g.order
    adj = g.adjacency
    edge_list = sorted(g.edges)
    for mask in range(1, 1 << n):
        if not _mask_connected(adj, mask):
            continue
        vs = _mask_vertices(mask)
        vset = frozenset(vs)
        if len(vs) == 1:
            yield Subtree(vset, frozenset())
            continue
        local = {v: i for i, v in enumerate(vs)}
        inside = [(local[u], local[v]) for u, v in edge_list
                  if mask >> u & 1 and mask >> v & 1]
        back = {(local[u], local[v]): (u, v) for u, v in edge_list
                if mask >> u & 1 and mask >> v & 1}
        for tree in _iter_spanning_trees(len(vs), inside):
            yield Subtree(vset, frozenset(back[e] for e in tree))


def subtree_stats_bruteforce(g: Graph) -> SubtreeStats:
    """Fold of `enumerate_subtrees`; independent of the determinant route."""
    count = 0
    total = 0
    for t in enumerate_subtrees(g):
        count += 1
        total += len(t.vertices)
    return SubtreeStats(count, total)


def tree_subtree_stats(t: Graph) -> SubtreeStats:
    """Exact stats for a tree via the rooted DP. Rejects non-trees."""
    if not t.is_tree():
        raise NotATreeError("input graph is not a tree")
    adj = [t.neighbors(v) for v in range(t.order)]
    c, s = subtree_stats_of_tree(t.order, adj)
    return SubtreeStats(c, s)


# ---------------------------------------------------------------------------
# Marked census

@dataclass(frozen=True)
class MarkedCensus:
    """Subtree statistics partitioned by signature.

    A signature is (set of marked vertices contained, number of tracked
    edges contained).  Cell sums reproduce the unpartitioned statistics.
    """

    marked: VertexSet
    tracked: frozenset[Edge]
    table: dict[tuple[VertexSet, int], SubtreeStats]

    def total(self) -> SubtreeStats:
        out = ZERO_STATS
        for stats in self.table.values():
            out = out + stats
        return out

    def cell(self, marks: Iterable[int], tracked_count: int = 0) -> SubtreeStats:
        return self.table.get((frozenset(marks), tracked_count), ZERO_STATS)

    def filtered(self,
                 min_marked: Iterable[int] = (),
                 tracked_count: int | None = None,
                 max_tracked: int | None = None) -> "MarkedCensus":
        """Sub-census of the cells whose signature passes every given test."""
        need = frozenset(min_marked)
        table = {}
        for (marks, cnt), stats in self.table.items():
            if not need <= marks:
                continue
            if tracked_count is not None and cnt != tracked_count:
                continue
            if max_tracked is not None and cnt > max_tracked:
                continue
            table[(marks, cnt)] = stats
        return MarkedCensus(self.marked, self.tracked, table)

    def project(self, keep: Iterable[int]) -> "MarkedCensus":
        """Collapse the marked dimension onto a subset of the marked vertices."""
        keep_set = frozenset(keep)
        if not keep_set <= self.marked:
            raise ValueError("projection outside the marked set")
        table: dict[tuple[VertexSet, int], SubtreeStats] = {}
        for (marks, cnt), stats in self.table.items():
            key = (marks & keep_set, cnt)
            table[key] = table.get(key, ZERO_STATS) + stats
        return MarkedCensus(keep_set, self.tracked, table)


def _check_census_args(g: Graph, marked: Iterable[int], tracked) -> tuple[VertexSet, list[Edge]]:
    marks = frozenset(marked)
    if len(marks) > MARKED_MAX:
        raise TooLargeError(f"at most {MARKED_MAX} marked vertices")
    if any(not 0 <= v < g.order for v in marks):
        raise ValueError("marked vertex outside the graph")
    tr = [edge(u, v) for u, v in (tracked or ())]
    if len(set(tr)) != len(tr):
        raise ValueError("duplicate tracked edge")
    for e in tr:
        if e not in g.edges:
            raise ValueError(f"tracked edge {e} not in the graph")
    return marks, tr


def _interpolate_int_poly(values: list[int]) -> list[int]:
    """Integer polynomial coefficients from values at x = 0, 1, ..., d."""
    d = len(values) - 1
    # Newton forward differences give the coefficients in the falling
    # factorial basis; convert to monomials exactly with Fractions.
    diffs = [Fraction(v) for v in values]
    newton = [diffs[0]]
    for level in range(1, d + 1):
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
        newton.append(diffs[0] / factorial(level))
    coeffs = [Fraction(0)] * (d + 1)
    basis = [Fraction(1)]  # falling factorial x(x-1)...(x-j+1) as monomials
    for j, c in enumerate(newton):
        for i, b in enumerate(basis):
            coeffs[i] += c * b
        nxt = [Fraction(0)] * (len(basis) + 1)
        for i, b in enumerate(basis):  # multiply by (x - j)
            nxt[i + 1] += b
            nxt[i] -= j * b
        basis = nxt
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise InvariantViolation("tracked-edge polynomial has non-integer coefficients")
        out.append(int(c))
    return out


def marked_census(g: Graph, marked: Iterable[int],
                  tracked: Iterable[tuple[int, int]] | None = None) -> MarkedCensus:
    """Partition subtree statistics by marked-vertex containment and
    tracked-edge count.

    The tracked dimension uses the weighted Matrix-Tree theorem: per
    connected subset, the spanning-tree generating polynomial in the
    tracked-edge weight is recovered by integer evaluation/interpolation.
    """
    if g.order > CENSUS_MAX:
        raise TooLargeError(f"census capped at {CENSUS_MAX} vertices")
    marks, tr = _check_census_args(g, marked, tracked)
    tr_set = frozenset(tr)
    table: dict[tuple[VertexSet, int], SubtreeStats] = {}

    def add(key, tau, size):
        if tau == 0:
            return
        prev = table.get(key, ZERO_STATS)
        table[key] = SubtreeStats(prev.count + tau, prev.total_order + tau * size)

    for mask in _iter_connected_masks(g.adjacency, g.order):
        size = bin(mask).count("1")
        cell_marks = frozenset(v for v in marks if mask >> v & 1)
        inside = [e for e in tr if mask >> e[0] & 1 and mask >> e[1] & 1]
        if not inside:
            add((cell_marks, 0), _tau_mask(g, mask), size)
            continue
        t = len(inside)
        values = []
        for x in range(t + 1):
            w = {e: x for e in inside}
            values.append(_tau_mask(g, mask, w))
        for j, coeff in enumerate(_interpolate_int_poly(values)):
            if coeff < 0:
                raise InvariantViolation("negative tracked-edge coefficient")
            add((cell_marks, j), coeff, size)
    return MarkedCensus(marks, tr_set, table)


def marked_census_bruteforce(g: Graph, marked: Iterable[int],
                             tracked: Iterable[tuple[int, int]] | None = None) -> MarkedCensus:
    """Same partition as `marked_census`, via explicit subtree listing."""
    marks, tr = _check_census_args(g, marked, tracked)
    tr_set = frozenset(tr)
    table: dict[tuple[VertexSet, int], SubtreeStats] = {}
    for t in enumerate_subtrees(g):
        key = (marks & t.vertices, len(tr_set & t.edges))
        prev = table.get(key, ZERO_STATS)
        table[key] = SubtreeStats(prev.count + 1, prev.total_order + len(t.vertices))
    return MarkedCensus(marks, tr_set, table)


def census_with_required(g: Graph, marked: Iterable[int],
                         required: Iterable[tuple[int, int]]) -> MarkedCensus:
    """Census of the subtrees containing every `required` edge.

    Spanning trees through a forced forest are counted by contracting the
    forced edges (multiplicities kept) before the determinant.  Cells carry
    tracked count == len(required), so the result composes with censuses
    that track the same edges.
    """
    if g.order > CENSUS_MAX:
        raise TooLargeError(f"census capped at {CENSUS_MAX} vertices")
    marks, req = _check_census_args(g, marked, required)
    if not req:
        return marked_census(g, marked)
    req_set = frozenset(req)
    endpoint_mask = 0
    for u, v in req:
        endpoint_mask |= (1 << u) | (1 << v)
    table: dict[tuple[VertexSet, int], SubtreeStats] = {}
    for mask in _iter_connected_masks(g.adjacency, g.order):
        if mask & endpoint_mask != endpoint_mask:
            continue
        tau = _tau_mask_contracted(g, mask, req)
        if tau == 0:
            continue
        size = bin(mask).count("1")
        cell_marks = frozenset(v for v in marks if mask >> v & 1)
        key = (cell_marks, len(req))
        prev = table.get(key, ZERO_STATS)
        table[key] = SubtreeStats(prev.count + tau, prev.total_order + tau * size)
    return MarkedCensus(marks, req_set, table)


def _tau_mask_contracted(g: Graph, mask: int, required: list[Edge]) -> int:
    """Spanning trees of the induced subgraph on `mask` containing every
    required edge: contract them and count in the quotient multigraph."""
    vs = _mask_vertices(mask)
    parent = {v: v for v in vs}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in required:
        ru, rv = find(u), find(v)
        if ru == rv:
            return 0  # required edges contain a cycle
        parent[ru] = rv
    roots = sorted({find(v) for v in vs})
    k = len(roots)
    if k == 1:
        return 1
    idx = {r: i for i, r in enumerate(roots)}
    lap = [[0] * k for _ in range(k)]
    req_set = set(required)
    for u, v in g.edges:
        if not (mask >> u & 1 and mask >> v & 1):
            continue
        if (u, v) in req_set:
            continue
        a, b = idx[find(u)], idx[find(v)]
        if a == b:
            continue
        lap[a][a] += 1
        lap[b][b] += 1
        lap[a][b] -= 1
        lap[b][a] -= 1
    minor = [row[1:] for row in lap[1:]]
    return _bareiss_det(minor)


# ---------------------------------------------------------------------------
# Pendant-star reduction

def attach_pendant_stars(census: MarkedCensus, leaf_counts: dict[int, int],
                         include_leaf_singletons: bool = True,
                         exponent_cap: int = EXPONENT_CAP) -> SubtreeStats:
    """Statistics of the graph with `leaf_counts[u]` pendant leaves at each
    hub u, from a census whose marked set is exactly the hub set.

    A core subtree containing hub u extends by any of the 2**s_u leaf
    subsets at u, adding s_u/2 vertices on average; the exact bookkeeping
    is done with the identity sum_{X subseteq leaves} |X| = s * 2**(s-1).
    Bare leaves contribute `s_u` extra singleton subtrees (suppressed for
    censuses that were filtered down to a restricted family).
    """
    if frozenset(leaf_counts) != census.marked:
        raise ValueError("leaf counts must cover exactly the census hub set")
    for u, s in leaf_counts.items():
        if s < 0:
            raise ValueError("negative leaf count")
        if s > exponent_cap:
            raise TooLargeError(
                f"leaf count 2**{s} exceeds the {exponent_cap}-bit exponent cap")
    pow2 = {u: 1 << s for u, s in leaf_counts.items()}
    count = 0
    total = 0
    for (hubs, _), stats in census.table.items():
        prod = 1
        for u in hubs:
            prod *= pow2[u]
        count += stats.count * prod
        total += stats.total_order * prod
        for u in hubs:
            s = leaf_counts[u]
            if s == 0:
                continue
            rest = prod // pow2[u]
            total += stats.count * s * (1 << (s - 1)) * rest
    if include_leaf_singletons:
        extra = sum(leaf_counts.values())
        count += extra
        total += extra
    return SubtreeStats(count, total)
