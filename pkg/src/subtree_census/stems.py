"""Exact mean subtree order of complete split and complete bipartite graphs.

Both hosts share a vertex bipartition into an m-side A (complete in the
split variant, independent in the bipartite one) and an independent n-side
B.  Each subtree is classified by its *stem*: the subtree induced by all of
its A-vertices together with the B-vertices of degree at least two.  Stems
on fixed label sets are enumerated over Prüfer sequences; everything else
is closed-form in n, so n may be large while m stays small.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable, Iterator, NamedTuple

from .census import EXPONENT_CAP, Subtree
from .errors import NoStemError, TooLargeError
from .graphs import Edge, Graph, make_complete_bipartite, make_complete_split
from .trees import prufer_edges

VARIANTS = ("split", "bipartite")
STEM_ENUM_MAX = 10  # Prüfer enumeration bound on a+b


@dataclass(frozen=True)
class Bipartition:
    """Host bipartition: A = 0..m-1, B = m..m+n-1."""

    m: int
    n: int
    variant: str

    def __post_init__(self):
        if self.m < 1 or self.n < 0:
            raise ValueError("need m >= 1 and n >= 0")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")

    @property
    def a_side(self) -> frozenset[int]:
        return frozenset(range(self.m))

    @property
    def b_side(self) -> frozenset[int]:
        return frozenset(range(self.m, self.m + self.n))

    def host_graph(self) -> Graph:
        if self.variant == "split":
            return make_complete_split(self.m, self.n)
        return make_complete_bipartite(self.m, self.n)


class StemClass(NamedTuple):
    """Class data of a stem: side sizes plus the decomposition of the edge
    identity b = a - 1 - (inner_edges + excess)."""

    a: int
    b: int
    inner_edges: int  # edges inside the A-side
    excess: int       # sum over B-vertices of (degree - 2)


def _degrees(tree: Subtree) -> dict[int, int]:
    deg = {v: 0 for v in tree.vertices}
    for u, v in tree.edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def is_stem(tree: Subtree, part: Bipartition) -> bool:
    """True when every B-side vertex of the tree has degree >= 2."""
    deg = _degrees(tree)
    b = part.b_side
    return all(deg[v] >= 2 for v in tree.vertices if v in b)


def stem_of(tree: Subtree, part: Bipartition) -> Subtree:
    """The subtree induced by A(T) and the B-vertices of degree >= 2.

    Undefined exactly when the tree is a single B-side vertex.
    """
    b = part.b_side
    if len(tree.vertices) == 1 and next(iter(tree.vertices)) in b:
        raise NoStemError("a single B-side vertex has no stem")
    deg = _degrees(tree)
    keep = frozenset(v for v in tree.vertices if v not in b or deg[v] >= 2)
    kept_edges = frozenset(e for e in tree.edges if e[0] in keep and e[1] in keep)
    return Subtree(keep, kept_edges)


def classify_stem(stem: Subtree, part: Bipartition) -> StemClass:
    a_side, b_side = part.a_side, part.b_side
    deg = _degrees(stem)
    a = sum(1 for v in stem.vertices if v in a_side)
    b = sum(1 for v in stem.vertices if v in b_side)
    inner = sum(1 for u, v in stem.edges if u in a_side and v in a_side)
    excess = sum(deg[v] - 2 for v in stem.vertices if v in b_side)
    return StemClass(a, b, inner, excess)


# ---------------------------------------------------------------------------
# Stem enumeration and counts on fixed labeled sides

def _check_class(a: int, b: int):
    if a < 1:
        raise ValueError("need at least one A-vertex")
    if b < 0 or b > a - 1:
        raise ValueError("stem classes require 0 <= b <= a-1")
    if a + b > STEM_ENUM_MAX:
        raise TooLargeError(f"stem enumeration capped at {STEM_ENUM_MAX} vertices")


def iter_stem_trees(variant: str, a: int, b: int) -> Iterator[tuple[Edge, ...]]:
    """All labeled stems on A = 0..a-1 and B = a..a+b-1: spanning trees whose
    edges respect the variant and whose B-vertices all have degree >= 2."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    _check_class(a, b)
    nt = a + b
    if nt == 1:
        yield ()
        return
    split = variant == "split"
    b_range = range(a, nt)
    if nt == 2:
        seqs: Iterable[tuple[int, ...]] = [()]
    else:
        seqs = product(range(nt), repeat=nt - 2)
    for seq in seqs:
        # degree(v) = 1 + multiplicity in the sequence, so B-degrees >= 2
        # exactly when every B-label appears.
        if b and not all(x in seq for x in b_range):
            continue
        edges = prufer_edges(seq, nt)
        ok = True
        for u, v in edges:
            if u >= a:  # u,v both in B
                ok = False
                break
            if v < a and not split:  # A-A edge in the bipartite variant
                ok = False
                break
        if ok:
            yield tuple(edges)


_stem_count_cache: dict[tuple[str, int, int], int] = {}


def stem_count(variant: str, a: int, b: int) -> int:
    """Number of labeled stems on fixed sides of sizes (a, b)."""
    key = (variant, a, b)
    if key not in _stem_count_cache:
        _stem_count_cache[key] = sum(1 for _ in iter_stem_trees(variant, a, b))
    return _stem_count_cache[key]


def extension_count(a: int, b: int, n: int) -> int:
    """(a+1)**(n-b): the number of host subtrees with a given stem of class
    (a, b), each obtained by hanging some of the n-b free B-vertices as
    leaves off one of the a stem A-vertices."""
    if b > n:
        raise ValueError("stem uses more B-vertices than the host has")
    return (a + 1) ** (n - b)


def class_size(variant: str, m: int, n: int, a: int, b: int) -> int:
    """Number of host subtrees whose stem has class (a, b)."""
    if a > m:
        raise ValueError("a exceeds the A-side size")
    if b > min(a - 1, n):
        raise ValueError("invalid stem class")
    return comb(m, a) * comb(n, b) * stem_count(variant, a, b) * extension_count(a, b, n)


def class_mean_order(n: int, a: int, b: int) -> Fraction:
    """Mean order of the host subtrees with a fixed stem of class (a, b):
    each free B-vertex is present with probability a/(a+1)."""
    return Fraction((n - b) * a, a + 1) + a + b


def graph_mean_order(variant: str, m: int, n: int,
                     exponent_cap: int = EXPONENT_CAP) -> Fraction:
    """Exact mean subtree order of the complete split graph (variant
    "split") or of the complete bipartite graph (variant "bipartite"),
    assembled from the stem classes plus the n single-B-vertex subtrees."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    if n.bit_length() > 64 or (n * (m + 1).bit_length()) > exponent_cap:
        raise TooLargeError("(a+1)**(n-b) would exceed the exponent cap")
    # fail fast on an infeasible class grid before any enumeration runs
    for a in range(1, m + 1):
        _check_class(a, min(a - 1, n))
    num = Fraction(0)
    den = 0
    for a in range(1, m + 1):
        for b in range(0, min(a - 1, n) + 1):
            f = stem_count(variant, a, b)
            if f == 0:
                continue
            size = comb(m, a) * comb(n, b) * f * (a + 1) ** (n - b)
            num += class_mean_order(n, a, b) * size
            den += size
    num += n  # single-B-vertex subtrees, order 1 each
    den += n
    return num / den


@dataclass(frozen=True)
class StemTable:
    variant: str
    m: int
    entries: dict[tuple[int, int], int]  # (a, b) -> stem count


def stem_table(variant: str, m: int) -> StemTable:
    entries = {}
    for a in range(1, m + 1):
        for b in range(0, a):
            entries[(a, b)] = stem_count(variant, a, b)
    return StemTable(variant, m, entries)


# ---------------------------------------------------------------------------
# Threshold search: first n where the split mean drops below the bipartite one

@dataclass(frozen=True)
class ThresholdReport:
    m: int
    n_max: int
    n_star: int | None          # minimal n with mu(split) < mu(bipartite)
    persists: bool              # strict inequality held for all n_star..n_max
    first_violation: int | None
    comparisons: tuple[tuple[int, int], ...]  # (n, sign(mu_split - mu_bip))


def threshold_search(m: int, n_max: int) -> ThresholdReport:
    """Compare the two variants exactly for every n up to n_max.

    Ties count as "no crossing at this n"; once a crossing is found the
    scan keeps going and records whether the inequality ever fails again.
    """
    comparisons = []
    n_star: int | None = None
    first_violation: int | None = None
    for n in range(1, n_max + 1):
        mu_split = graph_mean_order("split", m, n)
        mu_bip = graph_mean_order("bipartite", m, n)
        sign = -1 if mu_split < mu_bip else (0 if mu_split == mu_bip else 1)
        comparisons.append((n, sign))
        if n_star is None:
            if sign < 0:
                n_star = n
        elif sign >= 0 and first_violation is None:
            first_violation = n
    persists = n_star is not None and first_violation is None
    return ThresholdReport(m, n_max, n_star, persists, first_violation, tuple(comparisons))
