"""Star-ended path families and their exact subtree statistics.

The base family is a path of given core length with `s` pendant leaves
attached at each endpoint (a double broom); the star size `s` enters all
statistics only through powers of two, so it may be very large.  Variants
add chords to the core: the *fan* variant joins the first k path vertices
to the far hub, the *chorded* variant adds arbitrary disjoint-span chords.

Alongside the raw statistics live the structured subtree families used to
analyse them (subtrees anchored at the hub chord, subtrees classified by
which chords they use) and the scans that look for parameters where adding
chords makes the mean subtree order drop.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb
from typing import Callable, Iterable, NamedTuple

from .census import (
    EXPONENT_CAP,
    MarkedCensus,
    SubtreeStats,
    attach_pendant_stars,
    census_with_required,
    density,
    marked_census,
    mean,
)
from .errors import TooLargeError
from .graphs import (
    Edge,
    FamilyParams,
    Graph,
    VertexSet,
    edge,
    equal_span_chords,
    make_broom_core,
    make_chorded_broom_core,
    make_fan_broom_core,
)

CORE_MAX = 22  # census feasibility bound on the materialized core


# ---------------------------------------------------------------------------
# Star-size sequences

def default_star_rule(n: int) -> int:
    """ceil(2*log2(n)), computed exactly for arbitrary-precision n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (n * n - 1).bit_length()


def _pow2_at_least(s: int, m: int) -> bool:
    """Whether 2**s >= m, without forming 2**s."""
    if m <= 1:
        return True
    return s >= (m - 1).bit_length()


@dataclass(frozen=True)
class StarSizeSequence:
    """A rule n -> s_n together with the validity conditions that make the
    family constructions work: the core keeps at least k+1 vertices, and
    2**s_n grows at least like n**2.
    """

    k: int
    rule: Callable[[int], int] = default_star_rule

    def star_size(self, n: int) -> int:
        s = self.rule(n)
        if s < 0:
            raise ValueError("star size rule produced a negative value")
        return s

    def core_condition(self, n: int) -> bool:
        """2*s_n <= n - k - 1."""
        return 2 * self.star_size(n) <= n - self.k - 1

    def growth_condition(self, n: int) -> bool:
        """2**s_n >= n**2."""
        return _pow2_at_least(self.star_size(n), n * n)

    def validate(self, n: int):
        if not self.core_condition(n):
            raise ValueError(f"2*s_n > n-k-1 at n={n}")
        if not self.growth_condition(n):
            raise ValueError(f"2**s_n < n**2 at n={n}")

    def min_valid_n(self, horizon: int = 1 << 16) -> int:
        """Least m such that both conditions hold for every scanned n >= m.

        The scan is verified over a generous window past the last violation;
        for the default rule the slack grows linearly while the star size
        grows logarithmically, so the window is decisive in practice.
        """
        last_bad = 0
        for n in range(1, horizon + 1):
            if not (self.core_condition(n) and self.growth_condition(n)):
                last_bad = n
        if last_bad + 1 > horizon:
            raise ValueError("no valid start found within the horizon")
        m = last_bad + 1
        for n in range(m, max(4 * m, m + 512)):
            if not (self.core_condition(n) and self.growth_condition(n)):
                raise ValueError(f"conditions fail again at n={n}; rule is not eventually valid")
        return m

    def sublinearity_spot_check(self, ns: Iterable[int]) -> bool:
        """s_n/n non-increasing over the given points (finite stand-in for
        the asymptotic smallness of s_n)."""
        ratios = [Fraction(self.star_size(n), n) for n in ns]
        return all(a >= b for a, b in zip(ratios, ratios[1:]))


# ---------------------------------------------------------------------------
# Cached core censuses

@lru_cache(maxsize=None)
def _hub_census(core: Graph, hubs: VertexSet) -> MarkedCensus:
    return marked_census(core, hubs)


@lru_cache(maxsize=None)
def _marked_core_census(core: Graph, marks: VertexSet) -> MarkedCensus:
    return marked_census(core, marks)


@lru_cache(maxsize=None)
def _required_core_census(core: Graph, marks: VertexSet, required: tuple[Edge, ...]) -> MarkedCensus:
    return census_with_required(core, marks, required)


def _check_core(length: int):
    if length > CORE_MAX:
        raise TooLargeError(f"core length {length} exceeds the census bound {CORE_MAX}")


def _star_extend(cell_census: MarkedCensus, hubs: VertexSet, s: int,
                 include_leaf_singletons: bool) -> SubtreeStats:
    leaf_counts = {h: s for h in hubs}
    return attach_pendant_stars(cell_census, leaf_counts,
                                include_leaf_singletons=include_leaf_singletons)


# ---------------------------------------------------------------------------
# Family statistics

def broom_stats(length: int, s: int) -> SubtreeStats:
    """Exact statistics of the double broom: path core + s leaves per hub."""
    _check_core(length)
    core, hubs = make_broom_core(length)
    return _star_extend(_hub_census(core, hubs), hubs, s, True)


def fan_broom_stats(length: int, s: int, k: int) -> SubtreeStats:
    """Double broom plus the k fan chords (first k path vertices to far hub)."""
    _check_core(length)
    if k == 0:
        return broom_stats(length, s)
    core, hubs = make_fan_broom_core(length, k)
    return _star_extend(_hub_census(core, hubs), hubs, s, True)


def chorded_broom_stats(length: int, s: int, chords: Iterable[tuple[int, int]]) -> SubtreeStats:
    """Double broom plus arbitrary valid core chords."""
    _check_core(length)
    core, hubs = make_chorded_broom_core(length, chords)
    return _star_extend(_hub_census(core, hubs), hubs, s, True)


def path_mean_order(q: int) -> Fraction:
    """Mean subtree order of a path: (q+2)/3, exactly, any size."""
    if q < 1:
        raise ValueError("path order must be >= 1")
    return Fraction(q + 2, 3)


# ---------------------------------------------------------------------------
# Anchored families

def anchored_count_formula(n: int, s: int) -> int:
    """Closed form 2**(2s) * C(n-2s, 2) for the anchored family size."""
    length = n - 2 * s
    if length < 2:
        raise ValueError("need n - 2s >= 2")
    if s < 0:
        raise ValueError("negative star size")
    if 2 * s > EXPONENT_CAP:
        raise TooLargeError("2**(2s) exceeds the exponent cap")
    return (1 << (2 * s)) * comb(length, 2)


def _anchor_core(length: int) -> tuple[Graph, VertexSet]:
    # At length 2 the hub-hub chord coincides with the single path edge, so
    # the anchored family lives on the bare path core.
    if length == 2:
        return make_broom_core(2)
    return make_fan_broom_core(length, 1)


def anchor_edge_stats(length: int, s: int) -> SubtreeStats:
    """Statistics of the subtrees containing the hub-hub chord, in the fan
    variant with a single chord, stars attached."""
    _check_core(length)
    core, hubs = _anchor_core(length)
    anchor = edge(0, length - 1)
    cen = _required_core_census(core, hubs, (anchor,))
    return _star_extend(cen, hubs, s, False)


def fan_anchor_stats(k: int) -> SubtreeStats:
    """Statistics of the subtrees of the bare fan graph (path prefix of k
    vertices plus an apex joined to all of them) that contain the first
    prefix vertex, the last prefix vertex, and the apex."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k + 1 > 12:
        raise TooLargeError("fan graph capped at 12 vertices")
    apex = k
    pairs = [(i, i + 1) for i in range(k - 1)] + [(i, apex) for i in range(k)]
    fan = Graph.of(k + 1, pairs)
    marks = frozenset({0, k - 1, apex})
    cen = _marked_core_census(fan, marks)
    return cen.cell(marks)


def anchored_family_stats(length: int, s: int, k: int) -> SubtreeStats:
    """Statistics of the subtrees of the fan variant that contain the first
    and k-th path vertices and the far hub but not the whole remaining
    spine, stars attached.

    For k == 1 the spine condition degenerates; the family is, by
    definition, the subtrees containing the hub-hub chord.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return anchor_edge_stats(length, s)
    _check_core(length)
    core, hubs = make_fan_broom_core(length, k)
    marks = frozenset({0, k - 1, length - 1})
    spine = tuple((i, i + 1) for i in range(k - 1, length - 1))
    with_marks = _marked_core_census(core, marks).cell(marks)
    with_spine = _required_core_census(core, marks, spine).cell(marks, len(spine))
    cell = with_marks - with_spine
    hub_census = MarkedCensus(hubs, frozenset(), {(hubs, 0): cell})
    return _star_extend(hub_census, hubs, s, False)


def chord_class_stats(length: int, s: int, chords: Iterable[tuple[int, int]],
                      used: Iterable[tuple[int, int]]) -> SubtreeStats:
    """Statistics of the subtrees of the chorded variant whose chord set is
    exactly `used`, stars attached.

    Unused chords are deleted from the core, used ones are forced; the
    subfamilies over all chord subsets partition the full family.
    """
    _check_core(length)
    all_chords = frozenset(edge(u, v) for u, v in chords)
    used_set = frozenset(edge(u, v) for u, v in used)
    if not used_set <= all_chords:
        raise ValueError("used chords must be a subset of the chords")
    core, hubs = make_chorded_broom_core(length, all_chords)
    trimmed = core.remove_edges(all_chords - used_set)
    if not used_set:
        return _star_extend(_hub_census(trimmed, hubs), hubs, s, True)
    cen = _required_core_census(trimmed, hubs, tuple(sorted(used_set)))
    return _star_extend(cen, hubs, s, False)


# ---------------------------------------------------------------------------
# Witness scans

class DecreaseWitness(NamedTuple):
    length: int
    star_size: int
    mu_base: Fraction
    mu_added: Fraction


def geometric_star_sizes(s_max: int) -> list[int]:
    """0, 1, 2, 4, 8, ... up to s_max."""
    out = [0]
    v = 1
    while v <= s_max:
        out.append(v)
        v *= 2
    return out


def find_decrease_witnesses(k: int, lengths: Iterable[int],
                            star_sizes: Iterable[int]) -> list[DecreaseWitness]:
    """All (length, star size) pairs in the given ranges where adding the k
    fan chords strictly decreases the mean subtree order.  Exact rational
    comparisons; scan order is lengths-major."""
    if k < 1:
        raise ValueError("k must be >= 1")
    witnesses = []
    sizes = list(star_sizes)
    for length in lengths:
        for s in sizes:
            mu_base = mean(broom_stats(length, s))
            mu_added = mean(fan_broom_stats(length, s, k))
            if mu_added < mu_base:
                witnesses.append(DecreaseWitness(length, s, mu_base, mu_added))
    return witnesses


class ChordWitness(NamedTuple):
    length: int
    star_size: int
    span: int
    chords: tuple[Edge, ...]
    mu_base: Fraction
    mu_added: Fraction


def find_chorded_decrease_witness(k: int, lengths: Iterable[int],
                                  star_sizes: Iterable[int]) -> ChordWitness | None:
    """First parameter set where adding k equal-span chords strictly
    decreases the mean; spans are tried largest-first within each length."""
    if k < 1:
        raise ValueError("k must be >= 1")
    sizes = list(star_sizes)
    for length in lengths:
        max_span = (length - 1) // k
        for span in range(max_span, 1, -1):
            chords = equal_span_chords(length, k, span)
            for s in sizes:
                mu_base = mean(broom_stats(length, s))
                mu_added = mean(chorded_broom_stats(length, s, chords))
                if mu_added < mu_base:
                    return ChordWitness(length, s, span, chords, mu_base, mu_added)
    return None


class StepwiseTrace(NamedTuple):
    found: bool
    order: tuple[Edge, ...]
    means: tuple[Fraction, ...]  # mean before any deletion, then after each


def stepwise_deletion_check(length: int, s: int,
                            chords: Iterable[tuple[int, int]]) -> StepwiseTrace:
    """Search for an order to delete the chords one at a time so that the
    mean subtree order strictly increases at every step."""
    chord_set = frozenset(edge(u, v) for u, v in chords)

    @lru_cache(maxsize=None)
    def mu_of(remaining: frozenset) -> Fraction:
        return mean(chorded_broom_stats(length, s, remaining))

    start = mu_of(chord_set)
    if not chord_set:
        return StepwiseTrace(True, (), (start,))
    for order in permutations(sorted(chord_set)):
        means = [start]
        remaining = set(chord_set)
        ok = True
        for c in order:
            remaining.discard(c)
            nxt = mu_of(frozenset(remaining))
            if nxt <= means[-1]:
                ok = False
                break
            means.append(nxt)
        if ok:
            return StepwiseTrace(True, tuple(order), tuple(means))
    return StepwiseTrace(False, (), (start,))


# ---------------------------------------------------------------------------
# Density trend

class TrendRow(NamedTuple):
    n: int
    length: int
    star_size: int
    sigma_base: Fraction
    sigma_added: Fraction


@dataclass(frozen=True)
class TrendReport:
    k: int
    rows: tuple[TrendRow, ...]
    skipped: tuple[tuple[int, str], ...]


def density_trend(k: int, sequence: StarSizeSequence, ns: Iterable[int]) -> TrendReport:
    """Exact densities of the base and fan families along a star-size rule.

    Rows report sigma = mu/n for both graphs at each feasible n; infeasible
    points (core too long or too short for the chords) are skipped with a
    notice.  No limit is asserted; this is a finite trend table.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    rows = []
    skipped = []
    for n in ns:
        s = sequence.star_size(n)
        length = n - 2 * s
        if length < max(2, k + 2):
            skipped.append((n, f"core length {length} too short for {k} chords"))
            continue
        if length > CORE_MAX:
            skipped.append((n, f"core length {length} exceeds census bound {CORE_MAX}"))
            continue
        base = broom_stats(length, s)
        added = fan_broom_stats(length, s, k)
        rows.append(TrendRow(n, length, s, density(base, n), density(added, n)))
    return TrendReport(k, tuple(rows), tuple(skipped))


# ---------------------------------------------------------------------------
# Bundled per-parameter report (CLI convenience)

@dataclass(frozen=True)
class FamilyStats:
    params: FamilyParams
    base: SubtreeStats
    variants: dict[str, SubtreeStats]


def family_report(params: FamilyParams) -> FamilyStats:
    variants: dict[str, SubtreeStats] = {}
    base = broom_stats(params.core_length, params.star_size)
    if params.k:
        variants["fan"] = fan_broom_stats(params.core_length, params.star_size, params.k)
    if params.chords:
        variants["chorded"] = chorded_broom_stats(params.core_length, params.star_size, params.chords)
    return FamilyStats(params, base, variants)
