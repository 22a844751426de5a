"""Red-blue coloring container, text format, and pattern finders."""

import itertools
from fractions import Fraction

import pytest

from anticonc.errors import BudgetExceededError, ParseError, PreconditionError
from anticonc.hypergraph import complete_graph, make_complete_bipartite, make_gabm
from anticonc.ramsey import (
    PatternWitness,
    TwoColoring,
    alpha_r,
    coloring_to_text,
    find_bipartite_pattern,
    find_unavoidable_pattern,
    make_random_coloring,
    mixed_degree_sets,
    monochromatic_clique,
    parse_coloring_text,
    verify_bipartite_pattern,
    verify_pattern_witness,
)


def star_coloring():
    """n=8 graph: vertex 1 red to 2,3, blue to 4,5, rest uncolored."""
    return TwoColoring(2, 8, [(1, 2), (1, 3)], [(1, 4), (1, 5)])


# -- container ---------------------------------------------------------------


def test_coloring_basics():
    c = star_coloring()
    assert c.color_of((1, 2)) == "red"
    assert c.color_of((4, 1)) == "blue"
    assert c.color_of((7, 8)) == "uncolored"
    assert c.counts() == {"red": 2, "blue": 2, "uncolored": 28 - 4}
    assert not c.is_complete()
    with pytest.raises(PreconditionError):
        c.color_of((1, 9))


def test_coloring_validation():
    with pytest.raises(PreconditionError):
        TwoColoring(2, 4, [(1, 2)], [(1, 2)])
    with pytest.raises(PreconditionError):
        TwoColoring(2, 4, [(1, 5)], [])
    with pytest.raises(PreconditionError):
        TwoColoring(2, 4, [(1, 2)], [], uncolored=[(3, 4)])
    # explicit uncolored accepted when it is exactly the rest
    rest = [e for e in itertools.combinations(range(1, 4), 2) if e != (1, 2)]
    c = TwoColoring(2, 3, [(1, 2)], [], uncolored=rest)
    assert c.counts()["uncolored"] == 2


def test_from_graph_is_complete():
    g = make_gabm([1, 2, 3], [4, 5, 6], [])
    c = TwoColoring.from_graph(g)
    assert c.is_complete()
    assert c.counts()["red"] == g.edge_count()
    assert c.color_of((1, 4, 5)) == "red"
    assert c.color_of((1, 2, 3)) == "blue"


def test_make_random_coloring():
    c1 = make_random_coloring(2, 10, seed=4)
    c2 = make_random_coloring(2, 10, seed=4)
    assert (c1.red, c1.blue) == (c2.red, c2.blue)
    assert c1.is_complete()
    c3 = make_random_coloring(2, 10, seed=4, p_uncolored=0.5)
    assert sum(c3.counts().values()) == 45
    assert c3.counts()["uncolored"] > 0
    assert make_random_coloring(3, 8, seed=0, p_red=1.0).counts()["blue"] == 0


# -- text format ---------------------------------------------------------------


def test_coloring_text_round_trip():
    c = make_random_coloring(3, 7, seed=11, p_uncolored=0.2)
    c2 = parse_coloring_text(coloring_to_text(c))
    assert (c2.red, c2.blue, c2.uncolored) == (c.red, c.blue, c.uncolored)


def test_parse_coloring_unlisted_is_uncolored():
    c = parse_coloring_text("2 4\n1 2 R\n3 4 B\n# comment\n\n")
    assert c.color_of((1, 2)) == "red"
    assert c.color_of((3, 4)) == "blue"
    assert c.color_of((1, 3)) == "uncolored"


@pytest.mark.parametrize(
    "text,lineno",
    [
        ("", None),
        ("2\n", 1),
        ("2 1\n", 1),
        ("2 4\n1 2\n", 2),
        ("2 4\n1 2 G\n", 2),
        ("2 4\n1 5 R\n", 2),
        ("2 4\n2 2 R\n", 2),
        ("2 4\n1 2 R\n2 1 B\n", 3),
        ("x y\n", 1),
    ],
)
def test_parse_coloring_errors(text, lineno):
    with pytest.raises(ParseError) as e:
        parse_coloring_text(text)
    assert e.value.line == lineno


# -- mixed-degree sets ----------------------------------------------------------


def test_alpha_r_exact():
    assert alpha_r(3, Fraction(1, 5)) == Fraction(1, 15) ** 64
    assert alpha_r(2, Fraction(1)) == Fraction(1, 3) ** 16


def test_mixed_degree_sets_exact_threshold():
    c = star_coloring()
    # vertex 1 has red and blue degree exactly 2 = (1/4)*8
    assert mixed_degree_sets(c, Fraction(1, 4)) == [(1,)]
    assert mixed_degree_sets(c, Fraction(9, 32)) == []


def test_mixed_degree_sets_gabm_pairs():
    g = make_gabm([1, 2, 3, 4, 5], [6, 7, 8, 9, 10], [])
    c = TwoColoring.from_graph(g)
    # within-side pairs have red degree 5 and blue degree 3
    got = mixed_degree_sets(c, Fraction(3, 10))
    within = [
        p
        for p in itertools.combinations(range(1, 11), 2)
        if (p[0] <= 5) == (p[1] <= 5)
    ]
    assert got == within
    assert mixed_degree_sets(c, Fraction(4, 10)) == []


def test_mixed_degree_sets_budget():
    c = TwoColoring.from_graph(complete_graph(3, 12))
    with pytest.raises(BudgetExceededError):
        mixed_degree_sets(c, Fraction(1, 2), budget=10)


# -- bipartite patterns -----------------------------------------------------------


def test_bipartite_pattern_r3_gabm():
    g = make_gabm([1, 2, 3, 4, 5], [6, 7, 8, 9, 10], [])
    c = TwoColoring.from_graph(g)
    got = find_bipartite_pattern(c, 1)
    assert got is not None
    v_sets, red_set, blue_set = got
    assert len(v_sets) == 2 and all(len(vs) == 1 for vs in v_sets)
    assert len(red_set) == len(blue_set) == 1
    assert verify_bipartite_pattern(c, v_sets, red_set, blue_set)
    # swapping the sink sets breaks the pattern
    assert not verify_bipartite_pattern(c, v_sets, blue_set, red_set)


def test_bipartite_pattern_q2_needs_six_per_side():
    small = TwoColoring.from_graph(make_gabm(range(1, 6), range(6, 11), []))
    assert find_bipartite_pattern(small, 2) is None
    big = TwoColoring.from_graph(make_gabm(range(1, 7), range(7, 13), []))
    got = find_bipartite_pattern(big, 2)
    assert got is not None
    assert verify_bipartite_pattern(big, *got)


def test_bipartite_pattern_r2():
    c = TwoColoring.from_graph(make_complete_bipartite(3, 3))
    got = find_bipartite_pattern(c, 1)
    assert got is not None
    assert verify_bipartite_pattern(c, *got)


def test_bipartite_pattern_refusals_and_misses():
    with pytest.raises(PreconditionError):
        find_bipartite_pattern(TwoColoring(4, 8, [], []), 1)
    # all red: no blue sink can exist
    allred = TwoColoring.from_graph(complete_graph(2, 8))
    assert find_bipartite_pattern(allred, 1) is None
    # too few vertices for the disjoint sets
    tiny = TwoColoring.from_graph(complete_graph(3, 5))
    assert find_bipartite_pattern(tiny, 2) is None


# -- unavoidable patterns ------------------------------------------------------------


def profile_coloring(n):
    """Triples meeting {1,2}, {3,4} and {5...} are red, the rest blue."""
    parts = {v: 0 if v <= 2 else 1 if v <= 4 else 2 for v in range(1, n + 1)}
    red, blue = [], []
    for e in itertools.combinations(range(1, n + 1), 3):
        (red if len({parts[v] for v in e}) == 3 else blue).append(e)
    return TwoColoring(3, n, red, blue)


def test_unavoidable_pattern_t2():
    c = profile_coloring(6)
    w = find_unavoidable_pattern(c, 2)
    assert w is not None
    assert verify_pattern_witness(c, w)
    d = w.to_json_dict()
    assert len(d["sets"]) == 3 and all(len(s) == 2 for s in d["sets"])
    assert len(d["table"]) == 27


def test_unavoidable_pattern_t1_is_always_none():
    for seed in range(5):
        c = make_random_coloring(3, 7, seed=seed)
        assert find_unavoidable_pattern(c, 1) is None


def test_unavoidable_pattern_misses_and_refusals():
    allred = TwoColoring.from_graph(complete_graph(3, 7))
    assert find_unavoidable_pattern(allred, 2) is None
    assert find_unavoidable_pattern(profile_coloring(5), 2) is None
    with pytest.raises(PreconditionError):
        find_unavoidable_pattern(TwoColoring.from_graph(complete_graph(2, 6)), 2)
    with pytest.raises(PreconditionError):
        find_unavoidable_pattern(profile_coloring(6), 3)


def test_verify_pattern_witness_rejects_fabrications():
    c = profile_coloring(6)
    good = find_unavoidable_pattern(c, 2)
    # overlapping sets
    bad = PatternWitness([(1, 2), (2, 3), (5, 6)], good.color_table)
    assert not verify_pattern_witness(c, bad)
    # wrong table entry
    table = dict(good.color_table)
    key = next(f for f, col in table.items() if col == "red")
    table[key] = "blue"
    assert not verify_pattern_witness(c, PatternWitness(good.v_sets, table))
    # monochromatic union
    allred = TwoColoring.from_graph(complete_graph(3, 6))
    mono_table = {f: "red" for f in itertools.product((1, 2, 3), repeat=3)}
    assert not verify_pattern_witness(
        allred, PatternWitness([(1, 2), (3, 4), (5, 6)], mono_table)
    )


# -- monochromatic cliques -------------------------------------------------------------


def test_clique_below_uniformity_is_vacuous():
    c = TwoColoring(3, 6, [], [])
    assert monochromatic_clique(c, 2) == (1, 2)
    assert monochromatic_clique(c, 0) == ()


def test_clique_pentagon_has_no_mono_triangle():
    red = [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]
    c = TwoColoring(2, 5, red, set(itertools.combinations(range(1, 6), 2)) - set(red))
    assert monochromatic_clique(c, 3) is None
    assert monochromatic_clique(c, 2) is not None


def test_clique_ramsey_6_exhaustive():
    """Every complete red-blue coloring of pairs on 6 vertices contains a
    monochromatic triangle."""
    pairs = list(itertools.combinations(range(1, 7), 2))
    for bits in range(1 << 15):
        red = [p for i, p in enumerate(pairs) if bits >> i & 1]
        blue = [p for i, p in enumerate(pairs) if not bits >> i & 1]
        c = TwoColoring(2, 6, red, blue)
        got = monochromatic_clique(c, 3)
        assert got is not None
        colors = {c.color_of(e) for e in itertools.combinations(got, 2)}
        assert len(colors) == 1
