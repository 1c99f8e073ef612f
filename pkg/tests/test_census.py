import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subtree_census.census import (
    MarkedCensus,
    SubtreeStats,
    attach_pendant_stars,
    census_with_required,
    density,
    enumerate_subtrees,
    iter_connected_subsets,
    marked_census,
    marked_census_bruteforce,
    mean,
    spanning_tree_count,
    subtree_stats_bruteforce,
    subtree_stats_kirchhoff,
    tree_subtree_stats,
)
from subtree_census.errors import InvariantViolation, NotATreeError, TooLargeError
from subtree_census.graphs import (
    Graph,
    make_complete,
    make_cycle,
    make_double_broom,
    make_empty,
    make_path,
    make_star,
)
from subtree_census.trees import iter_labeled_trees

from conftest import random_connected_graph, random_graph, random_tree


# ---------------------------------------------------------------------------
# Hand-enumerated values

def test_single_vertex():
    g = make_empty(1)
    assert subtree_stats_bruteforce(g) == SubtreeStats(1, 1)
    assert subtree_stats_kirchhoff(g) == SubtreeStats(1, 1)
    assert tree_subtree_stats(g) == SubtreeStats(1, 1)


def test_k2():
    stats = subtree_stats_bruteforce(make_path(2))
    assert stats == SubtreeStats(3, 4)
    assert mean(stats) == Fraction(4, 3)


def test_k3():
    stats = subtree_stats_bruteforce(make_complete(3))
    assert stats == SubtreeStats(9, 18)
    assert mean(stats) == 2


def test_star_k13():
    stats = subtree_stats_kirchhoff(make_star(3))
    assert stats == SubtreeStats(11, 23)
    assert tree_subtree_stats(make_star(3)) == stats


def test_star_count_formula():
    for s in range(0, 10):
        stats = tree_subtree_stats(make_star(s))
        assert stats.count == 2**s + s


def test_path_mean_formula():
    for q in range(1, 51):
        stats = tree_subtree_stats(make_path(q))
        assert mean(stats) == Fraction(q + 2, 3)


def test_mean_density_basics():
    assert mean(SubtreeStats(3, 4)) == Fraction(4, 3)
    assert mean(SubtreeStats(1, 1)) == 1
    assert density(SubtreeStats(1, 1), 1) == 1
    stats = tree_subtree_stats(make_path(10))
    assert density(stats, 10) == Fraction(2, 5)
    with pytest.raises(ValueError):
        mean(SubtreeStats(0, 0))


# ---------------------------------------------------------------------------
# Spanning trees

def test_spanning_tree_count_cayley():
    for n in range(1, 9):
        assert spanning_tree_count(make_complete(n)) == n ** max(0, n - 2)


def test_spanning_tree_count_cases():
    assert spanning_tree_count(make_cycle(5)) == 5
    assert spanning_tree_count(make_star(7)) == 1
    assert spanning_tree_count(make_path(6)) == 1
    assert spanning_tree_count(make_empty(3)) == 0  # disconnected -> 0


# ---------------------------------------------------------------------------
# Oracle equivalence (small grids here; the full sweep is in acceptance)

def test_methods_agree_on_trees():
    for n in range(1, 8):
        for edges in iter_labeled_trees(n):
            if n > 6 and hash(tuple(edges)) % 17:
                continue  # sample at n=7 to keep this test quick
            g = Graph.of(n, edges)
            a = subtree_stats_bruteforce(g)
            b = subtree_stats_kirchhoff(g)
            c = tree_subtree_stats(g)
            assert a == b == c


def test_methods_agree_on_random_connected_graphs():
    rng = random.Random(123)
    for _ in range(60):
        g = random_connected_graph(rng, rng.randint(2, 8), 0.3)
        assert subtree_stats_bruteforce(g) == subtree_stats_kirchhoff(g)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_methods_agree_hypothesis(data):
    n = data.draw(st.integers(min_value=1, max_value=7))
    pairs = data.draw(st.sets(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda t: t[0] != t[1])))
    g = Graph.of(n, pairs)
    assert subtree_stats_bruteforce(g) == subtree_stats_kirchhoff(g)


def test_mu_bounds_random():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(1, 8)
        g = random_connected_graph(rng, n, 0.4)
        stats = subtree_stats_kirchhoff(g)
        assert stats.count >= n and stats.total_order >= n
        assert 1 <= mean(stats) <= n
        assert 0 < density(stats, n) <= 1


def test_not_a_tree_rejected():
    with pytest.raises(NotATreeError):
        tree_subtree_stats(make_complete(3))
    with pytest.raises(NotATreeError):
        tree_subtree_stats(make_empty(2))


def test_size_caps():
    with pytest.raises(TooLargeError):
        subtree_stats_bruteforce(make_empty(13))
    with pytest.raises(TooLargeError):
        subtree_stats_kirchhoff(make_empty(23))
    with pytest.raises(TooLargeError):
        spanning_tree_count(make_empty(41))


# ---------------------------------------------------------------------------
# Connected subset enumeration

def test_connected_subsets_unique_and_complete():
    rng = random.Random(31)
    for _ in range(30):
        n = rng.randint(1, 7)
        g = random_graph(rng, n, 0.5)
        subsets = list(iter_connected_subsets(g))
        assert len(subsets) == len(set(subsets))
        # reference: filter all subsets by connectivity
        def connected(vs):
            vs = set(vs)
            if not vs:
                return False
            stack = [next(iter(vs))]
            seen = {stack[0]}
            while stack:
                v = stack.pop()
                for u in g.neighbors(v):
                    if u in vs and u not in seen:
                        seen.add(u)
                        stack.append(u)
            return seen == vs
        want = {frozenset(c) for r in range(1, n + 1)
                for c in combinations(range(n), r) if connected(c)}
        assert set(subsets) == want


def test_enumerate_subtrees_k3():
    trees = list(enumerate_subtrees(make_complete(3)))
    assert len(trees) == 9
    sizes = sorted(len(t.vertices) for t in trees)
    assert sizes == [1, 1, 1, 2, 2, 2, 3, 3, 3]


# ---------------------------------------------------------------------------
# Marked census

def test_marked_census_p3_cells():
    cen = marked_census(make_path(3), {0, 2})
    assert cen.cell({0, 2}) == SubtreeStats(1, 3)
    assert cen.cell({0}) == SubtreeStats(2, 3)
    assert cen.cell({2}) == SubtreeStats(2, 3)
    assert cen.cell(()) == SubtreeStats(1, 1)


def test_marked_census_empty_marks_single_cell():
    g = make_complete(4)
    cen = marked_census(g, ())
    assert cen.total() == subtree_stats_kirchhoff(g)
    assert list(cen.table) == [(frozenset(), 0)]


def test_marked_census_cell_sums():
    rng = random.Random(17)
    for _ in range(25):
        n = rng.randint(2, 7)
        g = random_connected_graph(rng, n, 0.35)
        marked = rng.sample(range(n), rng.randint(0, min(3, n)))
        tracked = rng.sample(sorted(g.edges), min(2, g.size)) if g.size else []
        cen = marked_census(g, marked, tracked)
        assert cen.total() == subtree_stats_kirchhoff(g)


def test_marked_census_against_bruteforce():
    rng = random.Random(42)
    for _ in range(25):
        n = rng.randint(2, 7)
        g = random_connected_graph(rng, n, 0.35)
        marked = rng.sample(range(n), rng.randint(0, min(3, n)))
        tracked = rng.sample(sorted(g.edges), min(3, g.size)) if g.size else []
        a = marked_census(g, marked, tracked)
        b = marked_census_bruteforce(g, marked, tracked)
        assert a.table == b.table


def test_tracked_counts_max_cell_is_containment():
    # tracked = spine edges: the top tracked count is exactly the subtrees
    # containing every spine edge
    from subtree_census.graphs import make_fan_broom_core

    g, _ = make_fan_broom_core(7, 2)
    spine = [(i, i + 1) for i in range(1, 6)]
    cen = marked_census(g, {0, 1, 6}, spine)
    req = census_with_required(g, {0, 1, 6}, spine)
    for key, stats in req.table.items():
        assert cen.table[key] == stats


def test_census_with_required_triangle():
    cen = census_with_required(make_complete(3), (), [(0, 1)])
    assert cen.total() == SubtreeStats(3, 8)


def test_census_with_required_vs_bruteforce():
    rng = random.Random(77)
    for _ in range(25):
        n = rng.randint(2, 7)
        g = random_connected_graph(rng, n, 0.4)
        k = rng.randint(1, min(3, g.size))
        req = rng.sample(sorted(g.edges), k)
        got = census_with_required(g, (), req).total()
        want_count = want_total = 0
        for t in enumerate_subtrees(g):
            if all((min(e), max(e)) in t.edges for e in req):
                want_count += 1
                want_total += len(t.vertices)
        assert got == SubtreeStats(want_count, want_total)


def test_marked_census_validation():
    g = make_path(4)
    with pytest.raises(TooLargeError):
        marked_census(make_path(8), range(7))
    with pytest.raises(ValueError):
        marked_census(g, {9})
    with pytest.raises(ValueError):
        marked_census(g, (), [(0, 2)])  # not an edge


# ---------------------------------------------------------------------------
# Pendant star attachment

def test_attach_stars_k1_core_gives_star():
    cen = marked_census(make_empty(1), {0})
    assert attach_pendant_stars(cen, {0: 3}) == SubtreeStats(11, 23)


def test_attach_stars_zero_identity():
    g = make_path(5)
    cen = marked_census(g, {0, 4})
    assert attach_pendant_stars(cen, {0: 0, 4: 0}) == subtree_stats_kirchhoff(g)


def test_attach_stars_matches_bruteforce_small():
    from subtree_census.graphs import make_broom_core
    core, hubs = make_broom_core(3)
    cen = marked_census(core, hubs)
    got = attach_pendant_stars(cen, {h: 1 for h in hubs})
    want = subtree_stats_bruteforce(make_double_broom(3, 1))
    assert got == want


def test_attach_stars_random_instances():
    # >= 50 materializable instances against an independent full computation
    rng = random.Random(2024)
    from subtree_census.graphs import make_broom_core, make_fan_broom_core
    from subtree_census.graphs import make_double_broom, make_fan_broom
    checked = 0
    while checked < 50:
        length = rng.randint(2, 8)
        s = rng.randint(0, 2)
        k = rng.choice([0, 0, 1, 2])
        if k and length < k + 2:
            continue
        if k:
            core, hubs = make_fan_broom_core(length, k)
            materialized = make_fan_broom(length, s, k)
        else:
            core, hubs = make_broom_core(length)
            materialized = make_double_broom(length, s)
        if materialized.order > 12:
            continue
        got = attach_pendant_stars(marked_census(core, hubs), {h: s for h in hubs})
        assert got == subtree_stats_bruteforce(materialized)
        checked += 1


def test_attach_stars_larger_instances_vs_census():
    # beyond brute-force size, verify against the direct census of the
    # materialized graph (independent of the star algebra)
    from subtree_census.graphs import make_broom_core
    for length, s in [(6, 5), (10, 4), (8, 5)]:
        core, hubs = make_broom_core(length)
        got = attach_pendant_stars(marked_census(core, hubs), {h: s for h in hubs})
        assert got == subtree_stats_kirchhoff(make_double_broom(length, s))


def test_attach_stars_hub_mismatch():
    cen = marked_census(make_path(3), {0, 2})
    with pytest.raises(ValueError):
        attach_pendant_stars(cen, {0: 1})


def test_attach_stars_exponent_cap():
    cen = marked_census(make_path(2), {0, 1})
    with pytest.raises(TooLargeError):
        attach_pendant_stars(cen, {0: 10**9, 1: 0})


def test_attach_stars_huge_s_exact():
    # count formula for a double star: both hubs, one edge between them
    cen = marked_census(make_path(2), {0, 1})
    s = 1000
    got = attach_pendant_stars(cen, {0: s, 1: s})
    p = 1 << s
    want_count = p + p + p * p + 2 * s
    assert got.count == want_count


def test_stats_subtraction_guard():
    with pytest.raises(InvariantViolation):
        SubtreeStats(1, 1) - SubtreeStats(2, 2)
