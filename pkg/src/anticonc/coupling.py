"""The half-slice coupling between random k-subsets and sign vectors.

For even n, a uniform (n/2)-subset of {1..n} can be generated from a
uniform permutation sigma and independent uniform signs gamma: position
sigma(i) is selected when gamma_i = +1, and its partner sigma(i + n/2)
when gamma_i = -1.  Conditioned on sigma, the induced edge statistic
becomes a polynomial in the signs; this module extracts its top two
levels of coefficients in closed form and recovers the rest by exact
interpolation when needed.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from . import budget as budget_mod
from . import rng
from .errors import ParseError, PreconditionError
from .hypergraph import Hypergraph, mask_of, vertices_of
from .polynomials import MultilinearPolynomial


class SliceVector:
    """Zero-one sequence of length n with exactly k ones."""

    __slots__ = ("n", "k", "mask")

    def __init__(self, n: int, mask: int):
        self.n = n
        self.mask = mask
        self.k = mask.bit_count()
        if mask >> n:
            raise PreconditionError("bits outside 1..n")

    def bits(self) -> list[int]:
        return [(self.mask >> i) & 1 for i in range(self.n)]

    def support(self) -> tuple[int, ...]:
        return vertices_of(self.mask)


def sample_slice(n: int, k: int, seed: int, trial: int = 0) -> SliceVector:
    """Uniform point of BL(n,k)."""
    if not 0 <= k <= n:
        raise PreconditionError("need 0 <= k <= n")
    gen = rng.stream(seed, "slice", trial)
    return SliceVector(n, rng.random_ksubset(n, k, gen))


class CouplingSample:
    """A (sigma, gamma) pair and the slice point it induces."""

    __slots__ = ("n", "sigma", "gamma")

    def __init__(self, sigma: list[int], gamma: list[int]):
        n = len(sigma)
        if n % 2 != 0:
            raise PreconditionError("n must be even")
        if sorted(sigma) != list(range(1, n + 1)):
            raise PreconditionError("sigma is not a permutation of 1..n")
        if len(gamma) != n // 2 or any(s not in (-1, 1) for s in gamma):
            raise PreconditionError("gamma must be n/2 signs in {-1,+1}")
        self.n = n
        self.sigma = list(sigma)
        self.gamma = list(gamma)

    def xi(self) -> SliceVector:
        k = self.n // 2
        mask = 0
        for i in range(1, k + 1):
            v = self.sigma[i - 1] if self.gamma[i - 1] == 1 else self.sigma[i + k - 1]
            mask |= 1 << (v - 1)
        return SliceVector(self.n, mask)

    def to_json_dict(self) -> dict:
        return {"sigma": self.sigma, "gamma": self.gamma}

    @classmethod
    def from_json_dict(cls, d: dict) -> "CouplingSample":
        try:
            return cls([int(v) for v in d["sigma"]], [int(s) for s in d["gamma"]])
        except KeyError as e:
            raise ParseError(f"missing field {e.args[0]!r} in coupling sample")


def sample_coupled(n: int, seed: int, trial: int = 0) -> CouplingSample:
    """Uniform sigma (Fisher-Yates) and i.i.d. uniform signs."""
    if n % 2 != 0:
        raise PreconditionError("n must be even")
    gen = rng.stream(seed, "coupled", trial)
    sigma = rng.random_permutation(n, gen)
    gamma = rng.random_signs(n // 2, gen)
    return CouplingSample(sigma, gamma)


def evaluate_coupled(g: Hypergraph, sigma: list[int], gamma: list[int]) -> int:
    """Edge count induced by the slice point of (sigma, gamma)."""
    return g.induced_count(CouplingSample(sigma, gamma).xi().mask)


def _pair_degree_value(g: Hypergraph, rest: tuple[int, ...]) -> int:
    """a(R) for |R| = r-1: number of edges containing R."""
    rm = mask_of(rest)
    return sum(1 for e in g.edges if e & rm == rm)


def extract_coefficients(g: Hypergraph, sigma: list[int]) -> MultilinearPolynomial:
    """Degree r and r-1 coefficients of the coupled sign polynomial.

    The coefficient of gamma^I is 2^{-d} sum over b in {0,1}^|I| of
    (-1)^{|b|} a(R_b), where R_b picks sigma(i) or its partner
    sigma(i + n/2) per coordinate, a(R) is the edge indicator when
    |I| = d and the degree of the (d-1)-set R when |I| = d-1.  The
    formula is only valid at these two levels; anything lower must go
    through interpolate_polynomial.  Coefficients are stored with the
    1/2^d normalization; multiply by display_scale(d) for the integer
    signed-sum form.
    """
    n, d = g.n, g.r
    if n % 2 != 0:
        raise PreconditionError("n must be even")
    if sorted(sigma) != list(range(1, n + 1)):
        raise PreconditionError("sigma is not a permutation of 1..n")
    k = n // 2
    coeffs: dict[frozenset, Fraction] = {}
    scale = Fraction(1, 1 << d)
    for q in (d, d - 1):
        if q < 1 or q > k:
            continue
        for combo in itertools.combinations(range(1, k + 1), q):
            total = 0
            for b in range(1 << q):
                verts = tuple(
                    sigma[combo[j] - 1 + (k if b >> j & 1 else 0)]
                    for j in range(q)
                )
                if q == d:
                    val = 1 if mask_of(verts) in g.edges else 0
                else:
                    val = _pair_degree_value(g, verts)
                total += -val if b.bit_count() % 2 else val
            if total:
                coeffs[frozenset(combo)] = scale * total
    return MultilinearPolynomial(k, coeffs)


def display_scale(d: int) -> int:
    """Factor turning a stored coefficient into the integer signed sum."""
    return 1 << d


def interpolate_polynomial(
    g: Hypergraph, sigma: list[int], budget: int | None = None
) -> MultilinearPolynomial:
    """Full coupled polynomial, all degrees, by exact interpolation.

    Evaluates the edge statistic on every sign vector and applies a
    Walsh-Hadamard transform over exact integers.
    """
    n = g.n
    if n % 2 != 0:
        raise PreconditionError("n must be even")
    if sorted(sigma) != list(range(1, n + 1)):
        raise PreconditionError("sigma is not a permutation of 1..n")
    m = n // 2
    budget_mod.charge("flips", (1 << m) * max(m, 1), budget)
    size = 1 << m
    vals = np.zeros(size, dtype=np.int64)
    # bit i of c set <=> gamma_{i+1} = -1
    for c in range(size):
        mask = 0
        for i in range(m):
            v = sigma[i + m] if c >> i & 1 else sigma[i]
            mask |= 1 << (v - 1)
        vals[c] = g.induced_count(mask)
    h = 1
    while h < size:
        vals = vals.reshape(-1, 2 * h)
        a = vals[:, :h].copy()
        b = vals[:, h:].copy()
        vals[:, :h] = a + b
        vals[:, h:] = a - b
        vals = vals.reshape(-1)
        h *= 2
    coeffs: dict[frozenset, Fraction] = {}
    for pos in range(size):
        if vals[pos]:
            idx = frozenset(i + 1 for i in range(m) if pos >> i & 1)
            coeffs[idx] = Fraction(int(vals[pos]), size)
    return MultilinearPolynomial(m, coeffs)


def concentration_tail_bound(lipschitz, t: float) -> float:
    """exp(-t^2 / (8 sum c_i^2)) for nonnegative Lipschitz constants c_i."""
    cs = [float(c) for c in lipschitz]
    if any(c < 0 for c in cs) or t < 0:
        raise PreconditionError("need c_i >= 0 and t >= 0")
    if t == 0:
        return 1.0
    ssq = sum(c * c for c in cs)
    if ssq == 0:
        return 0.0
    return math.exp(-t * t / (8.0 * ssq))
