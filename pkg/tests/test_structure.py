"""Signed-sum family test, auxiliary graphs, greedy procedures, and
two-sided recognition."""

import itertools
import json
import math
from fractions import Fraction

import pytest

from anticonc import rng
from anticonc.coupling import extract_coefficients
from anticonc.errors import BudgetExceededError, PreconditionError
from anticonc.hypergraph import (
    Hypergraph,
    complete_graph,
    empty_graph,
    make_complete_bipartite,
    make_gabm,
    make_random,
    mask_of,
)
from anticonc.structure import (
    alternating_3path_count,
    build_auxiliary_H,
    check_induced_variability,
    count_good_tuples,
    degree2_threshold_tuples,
    f_membership,
    high_degree_set,
    matching_probability_experiment,
    recognize_gabm,
    run_greedy_procedure,
    sample_good_tuples,
)


def brute_good_tuples(g):
    total = 0
    for labels in itertools.permutations(range(1, g.n + 1), 6):
        if f_membership(g, labels)[1]:
            total += 1
    return total


def brute_alternating(g):
    total = 0
    for v, w, vp, wp in itertools.permutations(range(1, g.n + 1), 4):
        if g.a(v, w) == g.a(vp, wp) != g.a(vp, w):
            total += 1
    return total


def brute_threshold_tuples(g):
    n = g.n
    total = 0
    for x, xp, y, yp in itertools.permutations(range(1, n + 1), 4):
        s = (
            g.pair_degree(x, y)
            - g.pair_degree(xp, y)
            - g.pair_degree(x, yp)
            + g.pair_degree(xp, yp)
        )
        if 2 * s >= n:
            total += 1
    return total


# -- signed sum ------------------------------------------------------------


def test_f_membership_fixtures():
    g = Hypergraph(3, 6, [(1, 3, 5)])
    # only the (x,y,z) term survives
    assert f_membership(g, (1, 2, 3, 4, 5, 6)) == (1, True)
    # the same edge in the (x',y,z) slot carries sign -1
    assert f_membership(g, (2, 1, 3, 4, 5, 6)) == (-1, True)
    assert f_membership(empty_graph(3, 6), (1, 2, 3, 4, 5, 6)) == (0, False)
    with pytest.raises(PreconditionError):
        f_membership(g, (1, 1, 2, 3, 4, 5))
    with pytest.raises(PreconditionError):
        f_membership(empty_graph(2, 6), (1, 2, 3, 4, 5, 6))


def test_f_membership_antisymmetry():
    for seed in range(10):
        g = make_random(3, 8, "uniform-p", seed, p=0.5)
        gen = rng.stream(seed, "anti")
        labels = [int(v) + 1 for v in gen.choice(8, size=6, replace=False)]
        x, xp, y, yp, z, zp = labels
        s1, in1 = f_membership(g, labels)
        s2, in2 = f_membership(g, (xp, x, y, yp, z, zp))
        assert s2 == -s1 and in1 == in2
        # same for the y and z pairs
        assert f_membership(g, (x, xp, yp, y, z, zp))[0] == -s1
        assert f_membership(g, (x, xp, y, yp, zp, z))[0] == -s1


def test_f_membership_complement_negates():
    for seed in range(6):
        g = make_random(3, 7, "uniform-p", seed, p=0.5)
        gc = g.complement()
        gen = rng.stream(seed, "compl")
        labels = [int(v) + 1 for v in gen.choice(7, size=6, replace=False)]
        assert f_membership(gc, labels)[0] == -f_membership(g, labels)[0]


def test_count_good_tuples_frozen_single_edge():
    # single edge on 6 vertices: brute-force count frozen as a fixture
    g = Hypergraph(3, 6, [(1, 2, 3)])
    assert count_good_tuples(g) == 288
    assert brute_good_tuples(g) == 288


def test_count_good_tuples_matches_brute():
    for seed in range(4):
        g = make_random(3, 7, "uniform-p", seed, p=0.4)
        assert count_good_tuples(g) == brute_good_tuples(g)


def test_count_good_tuples_zero_cases():
    assert count_good_tuples(empty_graph(3, 7)) == 0
    assert count_good_tuples(complete_graph(3, 7)) == 0
    g = make_gabm(range(1, 5), range(5, 9), [(1, 5), (2, 6)])
    assert count_good_tuples(g) == 0


def test_count_good_tuples_budget():
    with pytest.raises(BudgetExceededError):
        count_good_tuples(empty_graph(3, 10), budget=100)


def test_sample_good_tuples():
    g = make_gabm(range(1, 6), range(6, 11), [])
    assert sample_good_tuples(g, 500, seed=1) == 0
    h = Hypergraph(3, 6, [(1, 2, 3)])
    frac = sample_good_tuples(h, 2000, seed=2)
    exact = Fraction(288, 6 * 5 * 4 * 3 * 2 * 1)
    assert abs(float(frac) - float(exact)) < 0.1
    assert sample_good_tuples(h, 100, seed=3) == sample_good_tuples(h, 100, seed=3)


# -- alternating 3-paths ----------------------------------------------------


def test_alternating_3path_trivial_and_fixture():
    assert alternating_3path_count(empty_graph(2, 6)) == 0
    assert alternating_3path_count(complete_graph(2, 6)) == 0
    # v-w edge, v'-w absent, v'-w' edge
    g = Hypergraph(2, 4, [(1, 2), (3, 4)])
    assert alternating_3path_count(g) == brute_alternating(g)
    assert alternating_3path_count(g) > 0


def test_alternating_3path_matches_brute():
    for seed in range(6):
        g = make_random(2, 8, "uniform-p", seed, p=0.5)
        assert alternating_3path_count(g) == brute_alternating(g)
    kb = make_complete_bipartite(4, 4)
    assert alternating_3path_count(kb) == brute_alternating(kb) > 0


# -- auxiliary graphs --------------------------------------------------------


def straight_line_four_term(g, sigma, i, j, k):
    return (
        g.a(sigma[i - 1], sigma[j - 1])
        - g.a(sigma[i - 1], sigma[j + k - 1])
        - g.a(sigma[i + k - 1], sigma[j - 1])
        + g.a(sigma[i + k - 1], sigma[j + k - 1])
    )


def test_auxiliary_graph_r2():
    for seed in range(10):
        g = make_random(2, 10, "uniform-p", seed, p=0.5)
        sigma = rng.random_permutation(10, rng.stream(seed, "aux"))
        aux = build_auxiliary_H(g, sigma)
        assert aux.k == 5 and aux.sigma == sigma
        for i, j in itertools.combinations(range(1, 6), 2):
            expected = straight_line_four_term(g, sigma, i, j, 5) != 0
            assert aux.h.has_edge(i, j) == expected
        # complement invariance: the 4-term negates, nonzeroness survives
        aux_c = build_auxiliary_H(g.complement(), sigma)
        assert aux_c.h == aux.h


def test_auxiliary_graph_r2_matches_coefficients():
    for seed in range(8):
        g = make_random(2, 8, "uniform-p", seed, p=0.5)
        sigma = rng.random_permutation(8, rng.stream(seed, "auxc"))
        aux = build_auxiliary_H(g, sigma)
        f = extract_coefficients(g, sigma)
        for i, j in itertools.combinations(range(1, 5), 2):
            assert aux.h.has_edge(i, j) == (f.coefficient((i, j)) != 0)


def test_auxiliary_graph_r3():
    for seed in range(5):
        g = make_random(3, 12, "uniform-p", seed, p=0.5)
        sigma = rng.random_permutation(12, rng.stream(seed, "aux3"))
        aux = build_auxiliary_H(g, sigma)
        f = extract_coefficients(g, sigma)
        k = 6
        for combo in itertools.combinations(range(1, k + 1), 3):
            assert aux.h.has_edge(*combo) == (f.coefficient(combo) != 0)
        for i, j in itertools.combinations(range(1, k + 1), 2):
            s = (
                g.pair_degree(sigma[i - 1], sigma[j - 1])
                - g.pair_degree(sigma[i + k - 1], sigma[j - 1])
                - g.pair_degree(sigma[i - 1], sigma[j + k - 1])
                + g.pair_degree(sigma[i + k - 1], sigma[j + k - 1])
            )
            assert aux.hprime.has_edge(i, j) == (2 * s >= 12)


def test_auxiliary_graph_preconditions():
    with pytest.raises(PreconditionError):
        build_auxiliary_H(empty_graph(2, 5), [1, 2, 3, 4, 5])
    with pytest.raises(PreconditionError):
        build_auxiliary_H(empty_graph(2, 4), [1, 2, 3, 3])
    assert build_auxiliary_H(empty_graph(2, 6), [1, 2, 3, 4, 5, 6]).h.edge_count() == 0


# -- greedy procedures --------------------------------------------------------


def hub_graph(n, hubs):
    """hubs vertices joined to everything; the rest form no other edges."""
    edges = [(u, w) for u in range(1, hubs + 1) for w in range(u + 1, n + 1)]
    return Hypergraph(2, n, edges)


def test_high_degree_set_exact_threshold():
    # n=10: threshold is degree >= 9, met with equality by a dominating vertex
    g = hub_graph(10, 1)
    assert g.vertex_degree(1) == 9
    assert high_degree_set(g) == [1]
    assert high_degree_set(empty_graph(2, 10)) == []
    assert high_degree_set(complete_graph(2, 10)) == list(range(1, 11))


def test_greedy_refusals():
    with pytest.raises(PreconditionError):
        run_greedy_procedure(make_complete_bipartite(8, 8), "high_degree", seed=0)
    with pytest.raises(PreconditionError):
        run_greedy_procedure(complete_graph(2, 10), "avoid_high_degree", seed=0)
    with pytest.raises(PreconditionError):
        run_greedy_procedure(empty_graph(2, 10), "high_degree", seed=0)
    with pytest.raises(PreconditionError):
        run_greedy_procedure(complete_graph(3, 9), "high_degree", seed=0)
    with pytest.raises(PreconditionError):
        run_greedy_procedure(empty_graph(2, 7), "avoid_high_degree", seed=0)
    with pytest.raises(PreconditionError):
        run_greedy_procedure(complete_graph(2, 10), "nope", seed=0)


def test_greedy_high_degree_trace():
    g = hub_graph(20, 8)
    tr = run_greedy_procedure(g, "high_degree", seed=5, step_budget=6)
    assert tr.variant == "high_degree"
    assert tr.pool == list(range(1, 9))
    assert tr.step_target == min((8 - 2) / 4, 0.2)
    assert len(tr.steps) <= 6
    assert sorted(tr.sigma_final) == list(range(1, 21))
    # the matching lives in H(G, sigma_final)
    aux = build_auxiliary_H(g, tr.sigma_final)
    used = set()
    for i, j in tr.matching:
        assert aux.h.has_edge(i, j)
        assert not ({i, j} & used)
        used |= {i, j}
    assert tr.successes() == len(tr.matching)


def test_greedy_avoid_trace_and_determinism():
    g = make_complete_bipartite(10, 10)
    tr1 = run_greedy_procedure(g, "avoid_high_degree", seed=9, step_budget=5)
    tr2 = run_greedy_procedure(g, "avoid_high_degree", seed=9, step_budget=5)
    assert tr1.steps == tr2.steps
    assert tr1.matching == tr2.matching
    assert tr1.sigma_final == tr2.sigma_final
    tr3 = run_greedy_procedure(g, "avoid_high_degree", seed=9, step_budget=5, trial=1)
    assert tr3.sigma_final != tr1.sigma_final
    # pool is a matching avoiding U (here U is empty: degrees are n/2)
    assert high_degree_set(g) == []
    for (a, b), (c, d) in itertools.combinations(tr1.pool, 2):
        assert len({a, b, c, d}) == 4
    # trace serializes as one JSON object per line
    lines = tr1.to_json_lines().strip().splitlines()
    assert len(lines) == len(tr1.steps)
    for line in lines:
        json.loads(line)


def test_greedy_step_semantics():
    g = make_complete_bipartite(12, 12)
    tr = run_greedy_procedure(g, "avoid_high_degree", seed=2, step_budget=8)
    k = 12
    for rec in tr.steps:
        if rec["reason"] == "success":
            assert rec["four_term"] != 0
            assert rec["i"] <= k and rec["j"] <= k
        elif rec["reason"] == "not_h_edge":
            assert rec["four_term"] == 0
        elif rec["reason"] == "index_beyond_k":
            assert rec["i"] > k or rec["j"] > k
        elif rec["reason"] == "partner_already_revealed":
            assert rec["i"] <= k and rec["j"] <= k


def test_greedy_default_step_count_follows_step_target():
    g = hub_graph(40, 30)
    tr = run_greedy_procedure(g, "high_degree", seed=1)
    # T = min((30-2)/4, 0.4) = 0.4 -> steps t = 0 only
    assert tr.step_target == 0.4
    assert len(tr.steps) == 1


def test_matching_probability_experiment():
    g = make_complete_bipartite(16, 16)
    rep = matching_probability_experiment(g, 200, seed=0, threshold=2)
    assert rep["samples"] == 200
    assert sum(rep["sizes"].values()) == 200
    # pilot-frozen fixture: size >= 2 in at least 95% of samples
    assert rep["fraction_at_or_above"] >= Fraction(95, 100)
    # empty graph: H is always empty
    rep0 = matching_probability_experiment(empty_graph(2, 8), 20, seed=1)
    assert rep0["sizes"] == {"0": 20}
    assert rep0["fraction_at_or_above"] == 0


# -- induced variability ------------------------------------------------------


def test_variability_trivial_witnesses():
    w = check_induced_variability(complete_graph(2, 8), 4)
    assert w["kind"] == "clique"
    w2 = check_induced_variability(empty_graph(2, 8), 4)
    assert w2["kind"] == "independent_set"
    with pytest.raises(PreconditionError):
        check_induced_variability(complete_graph(2, 7), 3)
    with pytest.raises(BudgetExceededError):
        check_induced_variability(empty_graph(2, 12), 6, budget=10)


def test_variability_differing_pair_is_real():
    # Moebius ladder: triangle-free with independence number 3, so with
    # k = 4 neither trivial witness exists and a differing pair must
    n = 8
    edges = [(i, i % n + 1) for i in range(1, n + 1)]
    edges += [(i, i + n // 2) for i in range(1, n // 2 + 1)]
    g = Hypergraph(2, n, edges)
    w = check_induced_variability(g, 4)
    assert w["kind"] == "differing_pair"
    c1 = g.induced_count(mask_of(w["first"]))
    c2 = g.induced_count(mask_of(w["second"]))
    assert (c1, c2) == tuple(w["counts"])
    assert c1 != c2


def test_variability_exhaustive_2k4():
    pairs = list(itertools.combinations(range(1, 5), 2))
    for bits in range(1 << 6):
        g = Hypergraph(2, 4, [p for i, p in enumerate(pairs) if bits >> i & 1])
        assert check_induced_variability(g, 2) is not None


def test_variability_r3():
    for seed in range(6):
        g = make_random(3, 8, "uniform-p", seed, p=0.5)
        assert check_induced_variability(g, 4) is not None


# -- recognition ---------------------------------------------------------------


def round_trip_ok(g, report):
    """Rebuild the recognized form and compare edge sets."""
    if report.verdict == "is_gabm":
        target = g
    elif report.verdict == "complement_is_gabm":
        target = g.complement()
    else:
        return False
    rebuilt = make_gabm(report.a_side, report.b_side, report.pairs)
    return rebuilt == target


def test_recognize_small_direct():
    g = make_gabm([1, 2, 3, 4, 5], [6, 7, 8, 9, 10], [(1, 6)])
    rep = recognize_gabm(g)
    assert rep.verdict == "is_gabm"
    assert round_trip_ok(g, rep)
    repc = recognize_gabm(g.complement())
    assert repc.verdict == "complement_is_gabm"
    assert round_trip_ok(g.complement(), repc)


def test_recognize_empty_and_complete():
    assert recognize_gabm(empty_graph(3, 8)).verdict in (
        "is_gabm",
        "complement_is_gabm",
    )
    rep = recognize_gabm(complete_graph(3, 8))
    assert rep.verdict in ("is_gabm", "complement_is_gabm")


def test_recognize_constructive_large():
    g = make_gabm(range(1, 8), range(8, 15), [(1, 8), (2, 9)])
    rep = recognize_gabm(g)
    assert rep.verdict == "is_gabm"
    assert round_trip_ok(g, rep)


def test_recognize_not_f_free_has_verified_tuple():
    g0 = make_gabm(range(1, 8), range(8, 15), [])
    g = Hypergraph(3, 14, g0.edges_as_tuples() + [(1, 2, 3)])
    rep = recognize_gabm(g)
    assert rep.verdict == "not_f_free"
    s, nonzero = f_membership(g, rep.bad_tuple)
    assert nonzero
    assert count_good_tuples(g) > 0


def test_recognize_json_shape():
    g = make_gabm([1, 2, 3], [4, 5, 6], [(1, 4)])
    d = recognize_gabm(g).to_json_dict()
    assert d["verdict"] == "is_gabm"
    assert sorted(d["A"] + d["B"]) == list(range(1, 7))
    assert d["M"] == [[1, 4]]


# -- thresholded tuples ----------------------------------------------------------


def test_threshold_tuples_trivial_and_brute():
    assert degree2_threshold_tuples(empty_graph(3, 8)) == 0
    for seed in range(4):
        g = make_random(3, 9, "uniform-p", seed, p=0.4)
        assert degree2_threshold_tuples(g) == brute_threshold_tuples(g)


def test_threshold_tuples_gabm_lower_bound():
    # cross tuples x,y' on one side and x',y on the other attain n-4
    g = make_gabm(range(1, 11), range(11, 21), [])
    n = 20
    count = degree2_threshold_tuples(g)
    assert count >= 10 * 9 * 10 * 9
    # spot check the displayed value on one such tuple
    s = (
        g.pair_degree(1, 11)
        - g.pair_degree(12, 11)
        - g.pair_degree(1, 2)
        + g.pair_degree(12, 2)
    )
    assert s == n - 4


def test_threshold_tuples_complement_invariant():
    # complementing negates the 4-term; swapping x and x' restores it,
    # a bijection on ordered tuples
    for seed in range(4):
        g = make_random(3, 9, "uniform-p", seed, p=0.5)
        assert degree2_threshold_tuples(g) == degree2_threshold_tuples(g.complement())


def test_threshold_tuples_budget():
    with pytest.raises(BudgetExceededError):
        degree2_threshold_tuples(empty_graph(3, 12), budget=10)
