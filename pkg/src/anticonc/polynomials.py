"""Multilinear polynomials over sign or zero-one variables.

A polynomial is a map from index sets I (subsets of {1..m}) to rational
coefficients.  The same representation serves polynomials in x on a
slice and polynomials in sign variables; only the evaluation domain
differs.  Rank here is the size of a matching among the supports of the
top-degree coefficients: disjoint supports give independent degree-d
contributions, which is what drives the point-probability bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import budget as budget_mod
from . import matching as matching_mod
from . import rng
from .errors import ParseError, PreconditionError


class MultilinearPolynomial:
    """Immutable sparse multilinear polynomial over variables 1..m."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs=None):
        clean: dict[frozenset, Fraction] = {}
        for idx, c in (coeffs or {}).items():
            key = frozenset(int(i) for i in idx)
            if any(not 1 <= i <= m for i in key):
                raise PreconditionError(f"index set {sorted(key)} outside 1..{m}")
            val = Fraction(c)
            if val != 0:
                clean[key] = clean.get(key, Fraction(0)) + val
                if clean[key] == 0:
                    del clean[key]
        self.m = m
        self.coeffs = clean

    def degree(self) -> int:
        return max((len(i) for i in self.coeffs), default=0)

    def coefficient(self, indices) -> Fraction:
        return self.coeffs.get(frozenset(indices), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, point) -> Fraction:
        """Evaluate at point[i-1] = value of variable i."""
        total = Fraction(0)
        for idx, c in self.coeffs.items():
            term = c
            for i in idx:
                term *= point[i - 1]
            total += term
        return total

    def homogeneous_part(self, d: int) -> "MultilinearPolynomial":
        return MultilinearPolynomial(
            self.m, {i: c for i, c in self.coeffs.items() if len(i) == d}
        )

    def scaled(self, factor) -> "MultilinearPolynomial":
        f = Fraction(factor)
        return MultilinearPolynomial(
            self.m, {i: c * f for i, c in self.coeffs.items()}
        )

    def plus(self, other: "MultilinearPolynomial") -> "MultilinearPolynomial":
        if other.m != self.m:
            raise PreconditionError("variable counts differ")
        merged = dict(self.coeffs)
        for i, c in other.coeffs.items():
            merged[i] = merged.get(i, Fraction(0)) + c
        return MultilinearPolynomial(self.m, merged)

    def max_abs_coefficient(self, d: int) -> Fraction:
        """m_d: largest |coefficient| among degree-d terms (0 if none)."""
        vals = [abs(c) for i, c in self.coeffs.items() if len(i) == d]
        return max(vals, default=Fraction(0))

    def supports(self, d: int) -> list[frozenset]:
        return [i for i in self.coeffs if len(i) == d]

    def __eq__(self, other):
        return (
            isinstance(other, MultilinearPolynomial)
            and (self.m, self.coeffs) == (other.m, other.coeffs)
        )

    def __repr__(self):
        return f"MultilinearPolynomial(m={self.m}, terms={len(self.coeffs)})"


# -- text format: one term per line "coeff i1 i2 ... id" ----------------


def parse_polynomial_text(text: str, m: int) -> MultilinearPolynomial:
    coeffs: dict[frozenset, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            c = Fraction(tokens[0])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad coefficient {tokens[0]!r}", lineno)
        try:
            idx = [int(t) for t in tokens[1:]]
        except ValueError:
            raise ParseError("variable indices must be integers", lineno)
        if any(not 1 <= i <= m for i in idx):
            raise ParseError(f"variable index outside 1..{m}", lineno)
        if len(set(idx)) != len(idx):
            raise ParseError("repeated variable in term", lineno)
        key = frozenset(idx)
        if key in coeffs:
            raise ParseError("duplicate term", lineno)
        coeffs[key] = c
    return MultilinearPolynomial(m, coeffs)


def polynomial_to_text(f: MultilinearPolynomial) -> str:
    lines = []
    for idx in sorted(f.coeffs, key=lambda i: (len(i), sorted(i))):
        parts = [str(f.coeffs[idx])] + [str(v) for v in sorted(idx)]
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


# -- rank certificates ---------------------------------------------------


@dataclass
class RankCertificate:
    matching: list[tuple[int, ...]]
    rank_lower_bound: int
    degree: int
    exact: bool

    def verify(self, f: MultilinearPolynomial) -> bool:
        used: set[int] = set()
        for s in self.matching:
            if len(s) != self.degree or used & set(s):
                return False
            if f.coefficient(s) == 0:
                return False
            used |= set(s)
        return len(self.matching) == self.rank_lower_bound


def compute_rank(f: MultilinearPolynomial, d: int) -> RankCertificate:
    """Matching among the supports of nonzero degree-d coefficients.

    Exact maximum matching for d = 2; greedy (within a factor d) above.
    """
    if f.is_zero() or d == 0:
        return RankCertificate([], 0, d, True)
    if d != f.degree():
        raise PreconditionError(f"d={d} but deg(f)={f.degree()}")
    sups = f.supports(d)
    if d == 2:
        pairs = [tuple(sorted(s)) for s in sups]
        matched = matching_mod.max_matching(f.m, pairs)
        return RankCertificate([tuple(p) for p in matched], len(matched), d, True)
    chosen = matching_mod.greedy_matching(sups)
    matching = [tuple(sorted(s)) for s in chosen]
    return RankCertificate(matching, len(matching), d, False)


def fallback_rank(f: MultilinearPolynomial, d: int) -> tuple[int, list[tuple[int, ...]]]:
    """Largest r such that the (d-1)-sets S with |f_S| >= r * m_d admit a
    greedy matching of size >= r.  When the degree-d part vanishes
    (m_d = 0) the threshold degenerates; qualifying sets are then those
    with strictly nonzero coefficient.

    Greedy matching size is not monotone under edge deletion, so r is
    found by a descending scan rather than binary search.
    """
    if d < 1:
        raise PreconditionError("need d >= 1")
    if f.degree() > d:
        raise PreconditionError(f"deg(f)={f.degree()} exceeds d={d}")
    md = f.max_abs_coefficient(d)
    candidates = [
        (i, abs(c)) for i, c in f.coeffs.items() if len(i) == d - 1 and c != 0
    ]
    if not candidates:
        return 0, []
    for r in range(len(candidates), 0, -1):
        threshold = r * md
        if md == 0:
            edges = [i for i, a in candidates]
        else:
            edges = [i for i, a in candidates if a >= threshold]
        matched = matching_mod.greedy_matching(edges)
        if len(matched) >= r:
            return r, [tuple(sorted(s)) for s in matched[:r]]
    return 0, []


# -- sign-vector statistics ----------------------------------------------


def _scaled_int_coeffs(f: MultilinearPolynomial) -> tuple[dict[frozenset, int], int]:
    """(integer coefficients, common denominator L) with c_I = int * 1/L."""
    denom = 1
    for c in f.coeffs.values():
        denom = math.lcm(denom, c.denominator)
    return {i: int(c * denom) for i, c in f.coeffs.items()}, denom


def sign_value_counts(f: MultilinearPolynomial, budget: int | None = None) -> dict[Fraction, int]:
    """Exact value counts of f over all 2^m sign vectors, via a
    Walsh-Hadamard transform of the (integer-scaled) coefficient vector.
    """
    m = f.m
    budget_mod.charge("flips", (1 << m) * max(m, 1), budget)
    ints, denom = _scaled_int_coeffs(f)
    bound = sum(abs(v) for v in ints.values())
    if bound >= 1 << 62:
        raise PreconditionError("coefficients too large for exact transform")
    vec = np.zeros(1 << m, dtype=np.int64)
    for idx, v in ints.items():
        pos = 0
        for i in idx:
            pos |= 1 << (i - 1)
        vec[pos] = v
    # values[c] = sum_I vec[I] * (-1)^{|I & c|}
    h = 1
    while h < len(vec):
        vec = vec.reshape(-1, 2 * h)
        a = vec[:, :h].copy()
        b = vec[:, h:].copy()
        vec[:, :h] = a + b
        vec[:, h:] = a - b
        vec = vec.reshape(-1)
        h *= 2
    vals, counts = np.unique(vec, return_counts=True)
    return {Fraction(int(v), denom): int(c) for v, c in zip(vals, counts)}


def mnv_rank_report(f: MultilinearPolynomial, trials: int, seed: int) -> dict:
    """Empirical max point probability of f over random sign vectors,
    reported next to the rank so the sqrt(rank) scaling can be charted.
    Constants hidden in the asymptotic statement are not asserted.
    """
    if trials <= 0:
        raise PreconditionError("trials must be positive")
    cert = compute_rank(f, f.degree())
    ints, denom = _scaled_int_coeffs(f)
    if sum(abs(v) for v in ints.values()) >= 1 << 62:
        raise PreconditionError("coefficients too large for exact evaluation")
    terms = list(ints.items())
    counts: dict[int, int] = {}
    done = 0
    block_idx = 0
    while done < trials:
        size = min(rng.BLOCK, trials - done)
        gen = rng.stream(seed, "mnv", block_idx)
        signs = gen.integers(0, 2, size=(size, f.m), dtype=np.int8) * 2 - 1
        vals = np.zeros(size, dtype=np.int64)
        for idx, v in terms:
            prod = np.ones(size, dtype=np.int64)
            for i in idx:
                prod *= signs[:, i - 1]
            vals += v * prod
        uniq, cnt = np.unique(vals, return_counts=True)
        for u, c in zip(uniq, cnt):
            counts[int(u)] = counts.get(int(u), 0) + int(c)
        done += size
        block_idx += 1
    top = max(counts.values())
    max_prob = Fraction(top, trials)
    return {
        "rank": cert.rank_lower_bound,
        "degree": f.degree(),
        "trials": trials,
        "seed": seed,
        "max_point_prob": max_prob,
        "scaled_prob": math.sqrt(max(cert.rank_lower_bound, 1)) * float(max_prob),
        "distinct_values": len(counts),
    }


def average_sensitivity(p: MultilinearPolynomial, m: int, budget: int | None = None) -> Fraction:
    """Average sensitivity of the threshold function 1_{p > 0} over
    {-1,1}^m, by full enumeration.  Ties p = 0 classify as output 0.
    """
    if m < p.m:
        raise PreconditionError("ambient m smaller than polynomial's m")
    budget_mod.charge("flips", (1 << m) * max(m, 1), budget)
    ints, _ = _scaled_int_coeffs(p)
    size = 1 << m
    vec = np.zeros(size, dtype=np.int64)
    bound = sum(abs(v) for v in ints.values())
    if bound >= 1 << 62:
        raise PreconditionError("coefficients too large for exact transform")
    for idx, v in ints.items():
        pos = 0
        for i in idx:
            pos |= 1 << (i - 1)
        vec[pos] = v
    h = 1
    while h < size:
        vec = vec.reshape(-1, 2 * h)
        a = vec[:, :h].copy()
        b = vec[:, h:].copy()
        vec[:, :h] = a + b
        vec[:, h:] = a - b
        vec = vec.reshape(-1)
        h *= 2
    out = vec > 0
    flips = 0
    idx_all = np.arange(size)
    for i in range(m):
        flips += int(np.count_nonzero(out != out[idx_all ^ (1 << i)]))
    return Fraction(flips, size)
