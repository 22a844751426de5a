"""Maximum matching (graphs) and greedy matching (set systems)."""

import itertools

from anticonc.hypergraph import make_random
from anticonc.matching import greedy_matching, max_matching, max_matching_size


def brute_max_matching_size(n, edges):
    """Oracle: branch on each edge (skip it, or take it and drop its
    neighbors).  Exponential, fine for small inputs."""

    def go(remaining, used):
        if not remaining:
            return 0
        e, *rest = remaining
        best = go(rest, used)
        if not (set(e) & used):
            best = max(best, 1 + go(rest, used | set(e)))
        return best

    return go(list(edges), set())


def is_matching(pairs):
    seen = set()
    for u, w in pairs:
        if u in seen or w in seen or u == w:
            return False
        seen.update((u, w))
    return True


def test_exhaustive_small_graphs():
    # every graph on up to 5 vertices
    for n in (2, 3, 4, 5):
        pairs = list(itertools.combinations(range(1, n + 1), 2))
        for bits in range(1 << len(pairs)):
            edges = [p for i, p in enumerate(pairs) if bits >> i & 1]
            m = max_matching(n, edges)
            assert is_matching(m)
            assert set(map(tuple, m)) <= set(edges)
            assert len(m) == brute_max_matching_size(n, edges)


def test_random_graphs_up_to_12():
    for seed in range(30):
        n = 6 + seed % 7
        g = make_random(2, n, "uniform-p", seed, p=0.35)
        edges = g.edges_as_tuples()
        m = max_matching(n, edges)
        assert is_matching(m)
        assert set(map(tuple, m)) <= set(edges)
        assert len(m) == brute_max_matching_size(n, edges)
        assert max_matching_size(n, edges) == len(m)


def test_odd_cycle_needs_blossoms():
    # C_9 plus chords that trap a purely greedy matcher; optimum is 4
    edges = [(i, i % 9 + 1) for i in range(1, 10)]
    assert max_matching_size(9, edges) == 4
    # two triangles joined by a bridge: optimum 3
    edges = [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 4)]
    assert max_matching_size(6, edges) == 3


def test_greedy_matching_set_systems():
    sets = [frozenset(s) for s in [(1, 2, 3), (3, 4, 5), (6, 7, 8), (1, 6, 9)]]
    m = greedy_matching(sets)
    # pairwise disjoint
    for a, b in itertools.combinations(m, 2):
        assert not (a & b)
    # maximal: every input set meets some chosen set
    for s in sets:
        assert any(s & c for c in m)
    # deterministic
    assert greedy_matching(sets) == m


def brute_max_set_matching(sets):
    def go(rest, used):
        if not rest:
            return 0
        s, *tail = rest
        best = go(tail, used)
        if not (s & used):
            best = max(best, 1 + go(tail, used | s))
        return best

    return go(list(sets), frozenset())


def test_greedy_matching_at_least_third_of_optimum():
    # a greedy maximal matching in a 3-uniform system is within factor 3
    for seed in range(10):
        g = make_random(3, 9, "uniform-p", seed, p=0.25)
        sets = [frozenset(e) for e in g.edges_as_tuples()]
        m = greedy_matching(sets)
        assert brute_max_set_matching(sets) <= 3 * len(m)
