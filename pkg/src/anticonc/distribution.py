"""Distribution of the induced edge statistic.

For an r-graph G and a uniformly random k-subset S of its vertices, let
X be the number of edges contained in S.  This module computes the law
of X exactly (by structured enumeration), estimates it by Monte Carlo,
searches for extremal graphs maximizing a point probability, and checks
the exponential tail bound exp(-t^2 / (8 * sum of squared degrees)).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import comb

import numpy as np

from . import budget as budget_mod
from . import rng
from .errors import ParseError, PreconditionError
from .hypergraph import Hypergraph, make_complete_bipartite

# -- revolving-door enumeration ----------------------------------------
#
# _gray(n, k) yields the k-subsets of {0..n-1} as sorted tuples in an
# order where consecutive subsets differ by exactly one element swap,
# so the induced edge count can be maintained incrementally.  Recursion:
# seq(n,k) = seq(n-1,k) then reversed(seq(n-1,k-1)) with n-1 appended;
# the seam moves k-2 out and n-1 in, one swap.


def _gray(n: int, k: int):
    if k == 0:
        yield ()
        return
    if k == n:
        yield tuple(range(n))
        return
    yield from _gray(n - 1, k)
    for s in _gray_rev(n - 1, k - 1):
        yield s + (n - 1,)


def _gray_rev(n: int, k: int):
    if k == 0:
        yield ()
        return
    if k == n:
        yield tuple(range(n))
        return
    for s in _gray(n - 1, k - 1):
        yield s + (n - 1,)
    yield from _gray_rev(n - 1, k)


def ksubsets_gray(n: int, k: int):
    """All k-subsets of {1..n} in single-swap order, as
    (mask, removed_vertex, added_vertex); the first yield has no diff.
    """
    prev = None
    mask = 0
    for cur in _gray(n, k):
        if prev is None:
            mask = 0
            for v in cur:
                mask |= 1 << v
            yield mask, None, None
        else:
            out_v = in_v = None
            a = set(prev)
            b = set(cur)
            (out_v,) = a - b
            (in_v,) = b - a
            mask ^= (1 << out_v) | (1 << in_v)
            yield mask, out_v + 1, in_v + 1
        prev = cur


# -- distribution table ------------------------------------------------


class DistributionTable:
    """Exact law of X: counts[l] = number of k-subsets inducing l edges."""

    def __init__(self, n: int, k: int, r: int, counts: dict[int, int]):
        self.n = n
        self.k = k
        self.r = r
        self.counts = {int(l): int(c) for l, c in counts.items() if c}
        self.total = comb(n, k)

    def check(self) -> None:
        """Internal consistency: counts sum to C(n,k), range 0..C(k,r)."""
        if sum(self.counts.values()) != self.total:
            raise AssertionError("counts do not sum to C(n,k)")
        top = comb(self.k, self.r)
        for l, c in self.counts.items():
            if c < 0 or not 0 <= l <= top:
                raise AssertionError(f"invalid entry {l}: {c}")

    def probability(self, ell: int) -> Fraction:
        return Fraction(self.counts.get(ell, 0), self.total)

    def max_point(self) -> tuple[int, Fraction]:
        """(l, Pr(X=l)) with the largest probability; smallest l on ties."""
        best = min(self.counts, key=lambda l: (-self.counts[l], l))
        return best, self.probability(best)

    def mean(self) -> Fraction:
        return Fraction(
            sum(l * c for l, c in self.counts.items()), self.total
        )

    def tail_probability(self, center: Fraction, t: Fraction) -> Fraction:
        """Pr(|X - center| >= t)."""
        num = sum(
            c for l, c in self.counts.items() if abs(Fraction(l) - center) >= t
        )
        return Fraction(num, self.total)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "total": str(self.total),
            "counts": {str(l): str(c) for l, c in sorted(self.counts.items())},
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "DistributionTable":
        counts = {int(l): int(c) for l, c in d["counts"].items()}
        table = cls(int(d["n"]), int(d["k"]), int(d["r"]), counts)
        if str(table.total) != d["total"]:
            raise ParseError(
                f"total {d['total']} does not match C({table.n},{table.k})"
            )
        return table

    def to_csv(self) -> str:
        lines = ["ell,count,probability"]
        for l in sorted(self.counts):
            lines.append(f"{l},{self.counts[l]},{self.probability(l)}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        return (
            isinstance(other, DistributionTable)
            and (self.n, self.k, self.r, self.counts)
            == (other.n, other.k, other.r, other.counts)
        )


def ell_star(k: int, r: int, ell: int) -> int:
    """min(l, C(k,r) - l), the symmetrized edge count."""
    return min(ell, comb(k, r) - ell)


# -- exact enumeration -------------------------------------------------


def _count_block(g: Hypergraph, k: int, fixed_min: int | None) -> dict[int, int]:
    """Counts over k-subsets, optionally restricted to subsets whose
    minimum vertex is fixed_min (used to partition work across threads).
    """
    n = g.n
    star = [[] for _ in range(n + 1)]
    for e in g.edges:
        for v_bit in range(n):
            if e >> v_bit & 1:
                star[v_bit + 1].append(e)
    counts: dict[int, int] = {}
    if fixed_min is None:
        ground = list(range(1, n + 1))
        kk = k
        base_mask = 0
    else:
        ground = list(range(fixed_min + 1, n + 1))
        kk = k - 1
        base_mask = 1 << (fixed_min - 1)
    if kk > len(ground) or kk < 0:
        return counts
    cur = 0
    count = 0
    first = True
    for mask, out_rel, in_rel in ksubsets_gray(len(ground), kk):
        if first:
            cur = base_mask
            for b in range(len(ground)):
                if mask >> b & 1:
                    cur |= 1 << (ground[b] - 1)
            count = g.induced_count(cur)
            first = False
        else:
            out_v = ground[out_rel - 1]
            in_v = ground[in_rel - 1]
            for e in star[out_v]:
                if e & cur == e:
                    count -= 1
            cur ^= (1 << (out_v - 1)) | (1 << (in_v - 1))
            for e in star[in_v]:
                if e & cur == e:
                    count += 1
        counts[count] = counts.get(count, 0) + 1
    return counts


def exact_distribution(
    g: Hypergraph, k: int, budget: int | None = None, threads: int = 1
) -> DistributionTable:
    """Exact law of X over all C(n,k) subsets.

    Refuses if C(n,k) exceeds the subset budget.  threads > 1 partitions
    the subsets by minimum vertex; the merged result is identical for
    every thread count.
    """
    if not 0 <= k <= g.n:
        raise PreconditionError(f"need 0 <= k <= n, got k={k}, n={g.n}")
    budget_mod.charge("subsets", comb(g.n, k), budget)
    if threads <= 1:
        counts = _count_block(g, k, None)
    else:
        mins = list(range(1, g.n - k + 2)) if k >= 1 else []
        counts = {}
        if k == 0:
            counts = _count_block(g, k, None)
        else:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                parts = list(ex.map(lambda m: _count_block(g, k, m), mins))
            for part in parts:
                for l, c in part.items():
                    counts[l] = counts.get(l, 0) + c
    table = DistributionTable(g.n, k, g.r, counts)
    table.check()
    return table


def point_probability(
    g: Hypergraph, k: int, ell: int, budget: int | None = None
) -> Fraction:
    return exact_distribution(g, k, budget).probability(ell)


# -- Monte Carlo -------------------------------------------------------


class MCResult:
    """Empirical counts of X over `trials` sampled subsets."""

    def __init__(self, n: int, k: int, r: int, trials: int, counts: dict[int, int], seed: int):
        self.n = n
        self.k = k
        self.r = r
        self.trials = trials
        self.counts = {int(l): int(c) for l, c in counts.items() if c}
        self.seed = seed

    def estimate(self, ell: int) -> Fraction:
        return Fraction(self.counts.get(ell, 0), self.trials)

    def stderr(self, ell: int) -> float:
        p = self.counts.get(ell, 0) / self.trials
        return math.sqrt(p * (1.0 - p) / self.trials)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "trials": self.trials,
            "seed": self.seed,
            "counts": {str(l): str(c) for l, c in sorted(self.counts.items())},
        }


def _mc_block(g: Hypergraph, k: int, trials: int, seed: int, block: int) -> dict[int, int]:
    gen = rng.stream(seed, "mc", block)
    counts: dict[int, int] = {}
    if g.n <= 64 and g.edges:
        edge_arr = np.fromiter(g.edges, dtype=np.uint64, count=len(g.edges))
        for _ in range(trials):
            mask = np.uint64(rng.random_ksubset(g.n, k, gen))
            x = int(np.count_nonzero((edge_arr & mask) == edge_arr))
            counts[x] = counts.get(x, 0) + 1
    else:
        for _ in range(trials):
            mask = rng.random_ksubset(g.n, k, gen)
            x = g.induced_count(mask)
            counts[x] = counts.get(x, 0) + 1
    return counts


def monte_carlo_probability(
    g: Hypergraph, k: int, ell: int, trials: int, seed: int, threads: int = 1
) -> tuple[float, float]:
    """(hit fraction for X = ell, its standard error) over `trials` samples."""
    res = mc_distribution(g, k, trials, seed, threads)
    return float(res.estimate(ell)), res.stderr(ell)


def mc_distribution(
    g: Hypergraph, k: int, trials: int, seed: int, threads: int = 1
) -> MCResult:
    """Monte-Carlo estimate of the law of X.

    Work is split into fixed blocks of rng.BLOCK trials; block i always
    consumes the stream derived from (seed, "mc", i), so the result is
    byte-identical for any thread count.
    """
    if not 0 <= k <= g.n:
        raise PreconditionError(f"need 0 <= k <= n, got k={k}, n={g.n}")
    if trials <= 0:
        raise PreconditionError("trials must be positive")
    blocks = []
    done = 0
    b = 0
    while done < trials:
        size = min(rng.BLOCK, trials - done)
        blocks.append((size, b))
        done += size
        b += 1
    if threads <= 1:
        parts = [_mc_block(g, k, size, seed, idx) for size, idx in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(
                ex.map(lambda sb: _mc_block(g, k, sb[0], seed, sb[1]), blocks)
            )
    counts: dict[int, int] = {}
    for part in parts:
        for l, c in part.items():
            counts[l] = counts.get(l, 0) + c
    return MCResult(g.n, k, g.r, trials, counts, seed)


# -- extremal search ---------------------------------------------------


def _pair_index(n: int) -> dict[tuple[int, int], int]:
    idx = {}
    p = 0
    for u in range(1, n + 1):
        for w in range(u + 1, n + 1):
            idx[(u, w)] = p
            p += 1
    return idx


def _subset_pair_masks(n: int, k: int) -> list[int]:
    """For each k-subset of {1..n}, the bitmap (over pair positions) of
    the C(k,2) vertex pairs it contains."""
    idx = _pair_index(n)
    out = []
    for mask, _, _ in ksubsets_gray(n, k):
        verts = [v + 1 for v in range(n) if mask >> v & 1]
        pm = 0
        for i, u in enumerate(verts):
            for w in verts[i + 1 :]:
                pm |= 1 << idx[(u, w)]
        out.append(pm)
    return out


def _graph_from_pair_bitmap(n: int, bits: int) -> Hypergraph:
    idx = _pair_index(n)
    edges = [pair for pair, pos in idx.items() if bits >> pos & 1]
    return Hypergraph(2, n, edges)


class ExtremalResult:
    def __init__(self, graph: Hypergraph, ell: int, k: int, prob: Fraction, evaluated: int, mode: str):
        self.graph = graph
        self.ell = ell
        self.k = k
        self.prob = prob
        self.evaluated = evaluated
        self.mode = mode


def extremal_search(
    n: int,
    k: int,
    ell: int,
    mode: str = "exhaustive",
    seed: int = 0,
    budget: int | None = None,
    restarts: int = 8,
) -> ExtremalResult:
    """Maximize Pr(X_{G,k} = ell) over graphs G on n vertices (r = 2).

    exhaustive: iterate all 2^C(n,2) graphs; the budget charge is
    graphs * subsets evaluations.  hill_climb: seeded random-restart
    single-edge-flip ascent under the same evaluation budget.
    """
    if not 2 <= k <= n:
        raise PreconditionError("need 2 <= k <= n")
    if not 0 <= ell <= comb(k, 2):
        raise PreconditionError("ell outside 0..C(k,2)")
    npairs = comb(n, 2)
    subs = _subset_pair_masks(n, k)
    total = len(subs)

    def prob_of(bits: int) -> Fraction:
        hits = 0
        for pm in subs:
            if (bits & pm).bit_count() == ell:
                hits += 1
        return Fraction(hits, total)

    if mode == "exhaustive":
        if n > 8:
            raise PreconditionError("exhaustive search limited to n <= 8")
        budget_mod.charge("graphs", (1 << npairs) * total, budget)
        best_bits, best_prob = 0, prob_of(0)
        for bits in range(1, 1 << npairs):
            p = prob_of(bits)
            if p > best_prob:
                best_bits, best_prob = bits, p
        return ExtremalResult(
            _graph_from_pair_bitmap(n, best_bits), ell, k, best_prob,
            1 << npairs, "exhaustive",
        )
    if mode == "hill_climb":
        limit = budget_mod.cap("graphs", budget)
        evaluated = 0
        best_bits, best_prob = None, Fraction(-1)
        for restart in range(restarts):
            gen = rng.stream(seed, "extremal", restart)
            bits = 0
            for pos in range(npairs):
                if gen.integers(0, 2):
                    bits |= 1 << pos
            cur = prob_of(bits)
            evaluated += 1
            improved = True
            while improved and evaluated < limit:
                improved = False
                order = gen.permutation(npairs)
                for pos in order:
                    cand = bits ^ (1 << int(pos))
                    p = prob_of(cand)
                    evaluated += 1
                    if p > cur:
                        bits, cur = cand, p
                        improved = True
                        break
                    if evaluated >= limit:
                        break
            if cur > best_prob:
                best_bits, best_prob = bits, cur
            if evaluated >= limit:
                break
        return ExtremalResult(
            _graph_from_pair_bitmap(n, best_bits), ell, k, best_prob,
            evaluated, "hill_climb",
        )
    raise PreconditionError(f"unknown mode {mode!r}")


def ind_value(n: int, k: int, ell: int, budget: int | None = None) -> Fraction:
    """I(n,k,ell) = max over n-vertex graphs of Pr(X = ell), exhaustively."""
    return extremal_search(n, k, ell, "exhaustive", budget=budget).prob


# -- blow-up lower-bound family ----------------------------------------


def blowup_bound(f: int, k: int, s: int) -> dict:
    """Complete bipartite blow-up K_{fs, f(k-s)} at ell = s(k-s).

    Returns the graph, the one-sided bound C(fs,s) C(f(k-s),k-s) / C(fk,k)
    coming from picking s vertices on one side and k-s on the other, and
    the exact probability (both split types contribute when feasible).
    """
    if not (1 <= s < k and f >= 1):
        raise PreconditionError("need 1 <= s < k and f >= 1")
    n1, n2 = f * s, f * (k - s)
    ell = s * (k - s)
    bound = Fraction(comb(n1, s) * comb(n2, k - s), comb(n1 + n2, k))
    exact = Fraction(0)
    for i in {s, k - s}:
        if i <= n1 and k - i <= n2:
            exact += Fraction(comb(n1, i) * comb(n2, k - i), comb(n1 + n2, k))
    return {
        "graph": make_complete_bipartite(n1, n2),
        "ell": ell,
        "bound": bound,
        "exact": exact,
    }


# -- concentration check -----------------------------------------------


def expected_edges(g: Hypergraph, k: int) -> Fraction:
    """E X = e(G) C(n-r, k-r) / C(n,k), exactly."""
    if k < g.r:
        return Fraction(0)
    return Fraction(g.edge_count() * comb(g.n - g.r, k - g.r), comb(g.n, k))


def concentration_regime_check(
    g: Hypergraph, k: int, ell: int, eps: Fraction | float
) -> tuple[float, bool]:
    """Exponential point-probability bound in the far-from-mean regime.

    For a graph (r = 2) on n = 2k vertices: applicable iff ell lies
    outside ((1-eps) E X, (1+eps) E X); the bound is
    exp(-t^2 / (8 sum_v deg(v)^2)) with t = |ell - E X|, which dominates
    Pr(X = ell) whenever applicable.
    """
    if g.r != 2:
        raise PreconditionError("concentration check is for graphs (r=2)")
    if g.n != 2 * k:
        raise PreconditionError("concentration check needs n = 2k")
    eps = Fraction(eps)
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    ex = expected_edges(g, k)
    applicable = ell >= (1 + eps) * ex or ell <= (1 - eps) * ex
    t = abs(Fraction(ell) - ex)
    ssq = sum(g.vertex_degree(v) ** 2 for v in range(1, g.n + 1))
    if ssq == 0:
        bound = 1.0 if t == 0 else 0.0
    else:
        bound = math.exp(-float(t * t) / (8.0 * ssq))
    return bound, bool(applicable)
