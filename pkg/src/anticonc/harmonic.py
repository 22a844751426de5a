"""Harmonic analysis on the slice BL(n,k).

A multilinear polynomial g is harmonic when the formal identity
sum_i dg/dx_i = 0 holds coefficient-by-coefficient.  Every function on
the slice has a unique harmonic representative of degree at most
min{d, k, n-k}; it is found here by an exact linear solve: build the
kernel of the derivative-sum map, evaluate that basis on the slice, and
solve the (exact, rational) normal equations.  The basis and Gram
inverse are cached per (n, k, degree).

The heat operator H_t scales the i-th homogeneous part by
exp(-t * 2i(n+1-i) / (n(n-1))).  Those factors are irrational, so they
are quantized once through Fraction(float); every identity checked
downstream (Parseval, orthogonality) is stated for the quantized
factors and therefore holds exactly.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from . import budget as budget_mod
from . import linalg
from .errors import PreconditionError
from .polynomials import MultilinearPolynomial

_CACHE: dict = {}


def slice_points(n: int, k: int) -> list[int]:
    """All weight-k masks on n bits."""
    out = []
    for combo in itertools.combinations(range(n), k):
        m = 0
        for b in combo:
            m |= 1 << b
        out.append(m)
    return out


def eval_at_mask(f: MultilinearPolynomial, mask: int) -> Fraction:
    """Evaluate with x_i = bit i-1 of mask (zero-one variables)."""
    total = Fraction(0)
    for idx, c in f.coeffs.items():
        if all(mask >> (i - 1) & 1 for i in idx):
            total += c
    return total


def slice_values(f: MultilinearPolynomial, n: int, k: int) -> list[Fraction]:
    return [eval_at_mask(f, m) for m in slice_points(n, k)]


def slice_inner(f: MultilinearPolynomial, g: MultilinearPolynomial, n: int, k: int) -> Fraction:
    """E[f(xi) g(xi)] over the uniform slice, exactly."""
    pts = slice_points(n, k)
    total = Fraction(0)
    for m in pts:
        total += eval_at_mask(f, m) * eval_at_mask(g, m)
    return total / len(pts)


def is_harmonic(g: MultilinearPolynomial) -> bool:
    """Check sum_i dg/dx_i = 0 as a formal polynomial identity."""
    sums: dict[frozenset, Fraction] = {}
    for idx, c in g.coeffs.items():
        for i in idx:
            u = idx - {i}
            sums[u] = sums.get(u, Fraction(0)) + c
    return all(v == 0 for v in sums.values())


def _monomials(n: int, max_deg: int) -> list[frozenset]:
    out = []
    for d in range(max_deg + 1):
        for combo in itertools.combinations(range(1, n + 1), d):
            out.append(frozenset(combo))
    return out


def _harmonic_basis(n: int, k: int, max_deg: int):
    """(monomials, integer basis matrix, H values on slice, Gram inverse).

    Cached.  Basis columns span the harmonic multilinear polynomials of
    degree <= max_deg; rows of H are their values at the slice points.
    """
    key = (n, k, max_deg)
    if key in _CACHE:
        return _CACHE[key]
    monos = _monomials(n, max_deg)
    mono_pos = {t: i for i, t in enumerate(monos)}
    rows = []
    for t in monos:
        if len(t) >= max_deg:
            continue
        # constraint: sum over v not in t of coeff(t + v) = 0
        row = [Fraction(0)] * len(monos)
        for v in range(1, n + 1):
            if v not in t:
                row[mono_pos[t | {v}]] = Fraction(1)
        rows.append(row)
    basis = linalg.nullspace(rows, len(monos))
    # scale each basis vector to integers
    int_basis = []
    for vec in basis:
        denom = 1
        for x in vec:
            denom = math.lcm(denom, x.denominator)
        int_basis.append([int(x * denom) for x in vec])
    pts = slice_points(n, k)
    hmat = []
    for mask in pts:
        row = []
        active = [
            i for i, t in enumerate(monos)
            if all(mask >> (v - 1) & 1 for v in t)
        ]
        for vec in int_basis:
            row.append(sum(vec[i] for i in active))
        hmat.append(row)
    b = len(int_basis)
    gram = [
        [
            Fraction(sum(hmat[p][i] * hmat[p][j] for p in range(len(pts))))
            for j in range(b)
        ]
        for i in range(b)
    ]
    ginv = linalg.inverse(gram)
    _CACHE[key] = (monos, int_basis, hmat, ginv)
    return _CACHE[key]


def harmonic_project(
    f: MultilinearPolynomial, n: int, k: int, budget: int | None = None
) -> MultilinearPolynomial:
    """The unique harmonic multilinear g of degree <= min{deg f, k, n-k}
    agreeing with f at every point of BL(n,k)."""
    if not 0 <= k <= n:
        raise PreconditionError("need 0 <= k <= n")
    max_deg = min(f.degree(), k, n - k)
    budget_mod.charge("points", math.comb(n, k), budget)
    monos, int_basis, hmat, ginv = _harmonic_basis(n, k, max_deg)
    pts = slice_points(n, k)
    vals = [eval_at_mask(f, m) for m in pts]
    b = len(int_basis)
    rhs = [
        sum(Fraction(hmat[p][i]) * vals[p] for p in range(len(pts)))
        for i in range(b)
    ]
    y = [sum(ginv[i][j] * rhs[j] for j in range(b)) for i in range(b)]
    coeffs: dict[frozenset, Fraction] = {}
    for j, vec in enumerate(int_basis):
        if y[j] == 0:
            continue
        for pos, t in enumerate(monos):
            if vec[pos]:
                coeffs[t] = coeffs.get(t, Fraction(0)) + y[j] * vec[pos]
    return MultilinearPolynomial(n, coeffs)


def homogeneous_parts(g: MultilinearPolynomial) -> list[MultilinearPolynomial]:
    """[g^{=0}, ..., g^{=deg g}]; the sum of the parts is g."""
    return [g.homogeneous_part(d) for d in range(g.degree() + 1)]


def heat_factor(n: int, i: int, t: float) -> Fraction:
    """Quantized eigenvalue factor exp(-t * 2i(n+1-i)/(n(n-1)))."""
    lam = 2 * i * (n + 1 - i) / (n * (n - 1))
    return Fraction(math.exp(-t * lam))


def apply_Ht(g: MultilinearPolynomial, t: float, n: int) -> MultilinearPolynomial:
    """Heat semigroup: scale the i-th homogeneous part by heat_factor."""
    if t < 0:
        raise PreconditionError("t must be nonnegative")
    out = MultilinearPolynomial(g.m, {})
    for i, part in enumerate(homogeneous_parts(g)):
        if part.is_zero():
            continue
        out = out.plus(part.scaled(heat_factor(n, i, t)))
    return out


def hypercontractive_rho(n: int, p: Fraction) -> float:
    """rho = -2 / (n log2 log(p(1-p)))."""
    p = Fraction(p)
    if not 0 < p < 1:
        raise PreconditionError("need p in (0,1)")
    return -2.0 / (n * math.log(2) * math.log(float(p * (1 - p))))


def minimal_hypercontractive_time(q: float, rho: float) -> float:
    """Smallest t with q - 1 <= e^(2 rho t)."""
    if q <= 1:
        return 0.0
    return math.log(q - 1) / (2 * rho)


def hypercontractivity_check(
    g: MultilinearPolynomial,
    n: int,
    p: Fraction,
    t: float,
    q: float,
) -> dict:
    """Check E[|H_t g|^q]^{2/q} <= E[g^2] on BL(n, pn).

    The hypothesis is q - 1 <= e^{2 rho t} with
    rho = -2 / (n log2 log(p(1-p))).  A violated hypothesis does not
    abort the check; it is reported so the caller can treat the result
    as informational.  Moments are exact sums; only the |.|^q power and
    the final comparison are floating point.
    """
    p = Fraction(p)
    if not 0 < p < 1 or (p * n).denominator != 1:
        raise PreconditionError("need p in (0,1) with pn integral")
    k = int(p * n)
    rho = hypercontractive_rho(n, p)
    hypothesis_ok = (q - 1) <= math.exp(2 * rho * t) + 1e-12
    htg = apply_Ht(g, t, n)
    pts = slice_points(n, k)
    powers = [abs(float(eval_at_mask(htg, m))) ** q for m in pts]
    lhs = (math.fsum(powers) / len(pts)) ** (2.0 / q)
    rhs = float(slice_inner(g, g, n, k))
    tol = 1e-9 * max(abs(rhs), 1.0)
    return {
        "lhs": lhs,
        "rhs": rhs,
        "holds": lhs <= rhs + tol,
        "hypothesis_ok": hypothesis_ok,
        "rho": rho,
        "minimal_t": minimal_hypercontractive_time(q, rho),
    }


def fourth_moment_ratio(f: MultilinearPolynomial, n: int, k: int) -> Fraction:
    """b = E[Z^4] / (E[Z^2])^2 for Z = f(xi) - E f(xi), exactly."""
    vals = slice_values(f, n, k)
    mean = sum(vals, Fraction(0)) / len(vals)
    zs = [v - mean for v in vals]
    m2 = sum(z * z for z in zs) / len(zs)
    if m2 == 0:
        raise PreconditionError("degenerate: zero variance")
    m4 = sum(z ** 4 for z in zs) / len(zs)
    return m4 / (m2 * m2)


def max_point_probability(f: MultilinearPolynomial, n: int, k: int) -> tuple[Fraction, Fraction]:
    """(most frequent value of f on the slice, its probability)."""
    vals = slice_values(f, n, k)
    counts: dict[Fraction, int] = {}
    for v in vals:
        counts[v] = counts.get(v, 0) + 1
    best = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))
    return best[0], Fraction(best[1], len(vals))


def moment_ratio_exact_check(b: Fraction, max_prob: Fraction) -> bool:
    """min_l Pr(Z != l) >= 1/(2^{4/3} b), compared exactly by cubing:
    equivalent to 16 (b (1 - maxp))^3 >= 1."""
    return 16 * (b * (1 - max_prob)) ** 3 >= 1


def weak_bound_exact_check(max_prob: Fraction, d: int) -> bool:
    """max point prob <= 1 - 2^{-4/3} 3^{-16d}, compared exactly:
    equivalent to 16 * 3^{48d} * (1 - maxp)^3 >= 1."""
    return 16 * 3 ** (48 * d) * (1 - max_prob) ** 3 >= 1


def weak_anticoncentration_bound(
    f: MultilinearPolynomial, n: int, k: int
) -> tuple[float, Fraction]:
    """(1 - 2^{-4/3} 3^{-16d} with d = deg f, exact max point probability).

    The explicit constant is stated for the induced edge statistic with
    d = r; for other polynomials the bound is heuristic and callers
    should verify with weak_bound_exact_check.  Requires the half slice
    k = n/2 and a non-constant f.
    """
    if n != 2 * k:
        raise PreconditionError("weak anticoncentration bound needs k = n/2")
    vals = slice_values(f, n, k)
    if all(v == vals[0] for v in vals):
        raise PreconditionError("f is constant on the slice")
    d = f.degree()
    bound = 1.0 - 2.0 ** (-4.0 / 3.0) * 3.0 ** (-16.0 * d)
    counts: dict[Fraction, int] = {}
    for v in vals:
        counts[v] = counts.get(v, 0) + 1
    maxp = Fraction(max(counts.values()), len(vals))
    return bound, maxp
