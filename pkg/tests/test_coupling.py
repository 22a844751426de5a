"""Half-slice coupling, coefficient extraction, and interpolation."""

import itertools
import math
from fractions import Fraction

import pytest

from anticonc import rng
from anticonc.coupling import (
    CouplingSample,
    SliceVector,
    concentration_tail_bound,
    display_scale,
    evaluate_coupled,
    extract_coefficients,
    interpolate_polynomial,
    sample_coupled,
    sample_slice,
)
from anticonc.errors import ParseError, PreconditionError
from anticonc.hypergraph import make_random, mask_of


def all_sign_vectors(m):
    return itertools.product((1, -1), repeat=m)


def test_slice_vector_basics():
    v = SliceVector(5, mask_of([1, 4]))
    assert v.k == 2
    assert v.support() == (1, 4)
    assert v.bits() == [1, 0, 0, 1, 0]
    with pytest.raises(PreconditionError):
        SliceVector(3, 1 << 3)


def test_sample_slice_uniform_and_seeded():
    assert sample_slice(6, 3, seed=1, trial=2).mask == sample_slice(6, 3, 1, 2).mask
    counts = {}
    for t in range(3000):
        counts[sample_slice(4, 2, seed=9, trial=t).mask] = (
            counts.get(sample_slice(4, 2, seed=9, trial=t).mask, 0) + 1
        )
    assert len(counts) == 6
    assert min(counts.values()) > 3000 / 6 * 0.7


def test_coupling_sample_validation():
    with pytest.raises(PreconditionError):
        CouplingSample([1, 2, 3], [1])
    with pytest.raises(PreconditionError):
        CouplingSample([1, 1, 2, 3], [1, -1])
    with pytest.raises(PreconditionError):
        CouplingSample([1, 2, 3, 4], [1, 0])
    with pytest.raises(ParseError):
        CouplingSample.from_json_dict({"sigma": [1, 2]})


def test_sample_json_round_trip():
    s = sample_coupled(8, seed=5)
    d = s.to_json_dict()
    t = CouplingSample.from_json_dict(d)
    assert (t.sigma, t.gamma) == (s.sigma, s.gamma)


def test_xi_definition():
    # sigma identity on n=4: gamma_i = +1 keeps sigma(i), else sigma(i+2)
    s = CouplingSample([1, 2, 3, 4], [1, -1])
    assert s.xi().support() == (1, 4)
    s2 = CouplingSample([4, 3, 2, 1], [-1, -1])
    assert s2.xi().support() == (1, 2)


def test_pushforward_exactly_uniform_n4():
    # all 4! * 2^2 = 96 pairs; each of the 6 slice points must appear
    # 96/6 = 16 times
    counts = {}
    for sigma in itertools.permutations(range(1, 5)):
        for gamma in all_sign_vectors(2):
            m = CouplingSample(list(sigma), list(gamma)).xi().mask
            counts[m] = counts.get(m, 0) + 1
    assert len(counts) == 6
    assert set(counts.values()) == {16}


def test_evaluate_coupled_equals_induced_count():
    for seed in range(10):
        r = 2 if seed % 2 else 3
        g = make_random(r, 8, "uniform-p", seed, p=0.5)
        s = sample_coupled(8, seed=seed)
        assert evaluate_coupled(g, s.sigma, s.gamma) == g.induced_count(s.xi().mask)


def test_extract_degree_bound_and_layers():
    for seed in range(12):
        r = 2 if seed % 2 else 3
        g = make_random(r, 8, "uniform-p", seed, p=0.5)
        sigma = rng.random_permutation(8, rng.stream(seed, "t"))
        f = extract_coefficients(g, sigma)
        assert f.degree() <= r
        assert all(len(i) in (r, r - 1) for i in f.coeffs)


def test_interpolation_reproduces_evaluation_and_top_layers():
    for seed in range(20):
        r = 2 if seed % 2 else 3
        n = 6 if seed % 3 else 8
        g = make_random(r, n, "uniform-p", seed, p=0.5)
        sigma = rng.random_permutation(n, rng.stream(seed, "interp"))
        full = interpolate_polynomial(g, sigma)
        m = n // 2
        for gamma in all_sign_vectors(m):
            assert full.evaluate(gamma) == evaluate_coupled(g, sigma, list(gamma))
        top = extract_coefficients(g, sigma)
        for q in (r, r - 1):
            for idx in itertools.combinations(range(1, m + 1), q):
                assert full.coefficient(idx) == top.coefficient(idx)


def test_degree2_coefficient_is_pair_degree_four_term():
    # for a 3-graph the degree-2 layer is the alternating pair-degree sum,
    # carried with the same 1/8 factor as the top layer
    for seed in range(8):
        g = make_random(3, 8, "uniform-p", seed, p=0.5)
        sigma = rng.random_permutation(8, rng.stream(seed, "disp"))
        f = extract_coefficients(g, sigma)
        k = 4
        for i, j in itertools.combinations(range(1, k + 1), 2):
            four = (
                g.pair_degree(sigma[i - 1], sigma[j - 1])
                - g.pair_degree(sigma[i + k - 1], sigma[j - 1])
                - g.pair_degree(sigma[i - 1], sigma[j + k - 1])
                + g.pair_degree(sigma[i + k - 1], sigma[j + k - 1])
            )
            assert f.coefficient([i, j]) * display_scale(3) == four


def test_top_coefficient_is_edge_indicator_eight_term():
    for seed in range(6):
        g = make_random(3, 6, "uniform-p", seed, p=0.5)
        sigma = rng.random_permutation(6, rng.stream(seed, "eight"))
        f = extract_coefficients(g, sigma)
        k = 3
        (combo,) = [tuple(range(1, 4))]
        total = 0
        for b in range(8):
            verts = [sigma[combo[t] - 1 + (k if b >> t & 1 else 0)] for t in range(3)]
            val = g.a(*verts)
            total += -val if bin(b).count("1") % 2 else val
        assert f.coefficient(combo) * display_scale(3) == total


def test_interpolation_budget_charge():
    from anticonc.errors import BudgetExceededError

    g = make_random(2, 8, "uniform-p", 0, p=0.5)
    sigma = list(range(1, 9))
    with pytest.raises(BudgetExceededError):
        interpolate_polynomial(g, sigma, budget=3)


def test_tail_bound_values():
    assert concentration_tail_bound([1, 1], 0) == 1.0
    assert concentration_tail_bound([0, 0], 5) == 0.0
    b = concentration_tail_bound([1, 1, 1, 1], 4)
    assert b == pytest.approx(math.exp(-16 / 32))
    assert concentration_tail_bound([Fraction(1, 2)], 1) == pytest.approx(
        math.exp(-1 / 2.0)
    )
    with pytest.raises(PreconditionError):
        concentration_tail_bound([-1], 1)
    with pytest.raises(PreconditionError):
        concentration_tail_bound([1], -1)


def test_tail_bound_dominates_empirical_tail():
    # Lipschitz constants: swapping one coordinate pair changes the edge
    # count by at most max pair influence; use degree-based constants
    g = make_random(2, 10, "uniform-p", 7, p=0.5)
    sigma = rng.random_permutation(10, rng.stream(7, "tail"))
    full = interpolate_polynomial(g, sigma)
    vals = [full.evaluate(gamma) for gamma in all_sign_vectors(5)]
    mean = sum(vals, Fraction(0)) / len(vals)
    cs = [
        sum(abs(c) for idx, c in full.coeffs.items() if i in idx)
        for i in range(1, 6)
    ]
    for t in (1, 2, 4):
        emp = sum(1 for v in vals if abs(v - mean) >= t) / len(vals)
        assert emp <= concentration_tail_bound(cs, t) + 1e-12
