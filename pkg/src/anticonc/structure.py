"""Structural procedures on graphs and 3-graphs.

Contents: the 8-term signed test on labeled 6-tuples and its tuple
counter, alternating 3-path counting, the auxiliary (hyper)graphs built
from a permutation, the two reveal-as-you-go greedy matching procedures,
an experiment measuring matching sizes over random permutations, the
induced-variability witness search, recognition of the two-sided family
built by make_gabm, and the thresholded second-degree tuple count.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import budget as budget_mod
from . import rng
from .errors import PreconditionError
from .hypergraph import Hypergraph, mask_of, vertices_of
from .matching import greedy_matching, max_matching

# -- the signed 6-tuple test --------------------------------------------
#
# For labels (x, x', y, y', z, z') the tested expression is
#   a_xyz - a_xyz' - a_xy'z - a_x'yz + a_xy'z' + a_x'yz' + a_x'y'z - a_x'y'z'
# (sign = parity of the number of primed labels).


def f_membership(g: Hypergraph, labels) -> tuple[int, bool]:
    """Signed sum over the 8 mixed triples of a labeled 6-tuple.

    labels = (x, x', y, y', z, z'), distinct vertices of g (r = 3).
    Returns (sum, sum != 0).
    """
    if g.r != 3:
        raise PreconditionError("f_membership needs a 3-graph")
    x, xp, y, yp, z, zp = labels
    if len({x, xp, y, yp, z, zp}) != 6:
        raise PreconditionError("labels must be 6 distinct vertices")
    total = 0
    for i, j, l in itertools.product((0, 1), repeat=3):
        v1 = xp if i else x
        v2 = yp if j else y
        v3 = zp if l else z
        val = g.a(v1, v2, v3)
        total += -val if (i + j + l) % 2 else val
    return total, total != 0


def count_good_tuples(g: Hypergraph, budget: int | None = None) -> int:
    """Number of ordered distinct 6-tuples whose signed sum is nonzero.

    Exhaustive; vectorizes the inner (z, z') pair: for fixed
    (x, x', y, y') the sum is P(z) - P(z') with
    P(w) = a_xyw - a_xy'w - a_x'yw + a_x'y'w, so unequal P values are
    exactly the good completions.
    """
    if g.r != 3:
        raise PreconditionError("count_good_tuples needs a 3-graph")
    n = g.n
    budget_mod.charge("tuples", n ** 6, budget)
    adj = np.zeros((n + 1, n + 1, n + 1), dtype=np.int8)
    for e in g.edges:
        verts = [v + 1 for v in range(n) if e >> v & 1]
        for p in itertools.permutations(verts):
            adj[p] = 1
    total = 0
    ids = np.arange(n + 1)
    for x, xp, y, yp in itertools.permutations(range(1, n + 1), 4):
        p = adj[x, y] - adj[x, yp] - adj[xp, y] + adj[xp, yp]
        valid = (ids != x) & (ids != xp) & (ids != y) & (ids != yp)
        valid[0] = False
        vals = p[valid]
        m = len(vals)
        counts = np.bincount(vals + 2, minlength=5)
        total += m * m - int(np.sum(counts * counts))
    return total


def sample_good_tuples(g: Hypergraph, samples: int, seed: int) -> Fraction:
    """Fraction of uniformly random ordered distinct 6-tuples that are good."""
    if g.r != 3:
        raise PreconditionError("needs a 3-graph")
    if g.n < 6:
        raise PreconditionError("needs at least 6 vertices")
    gen = rng.stream(seed, "good_tuples")
    hits = 0
    for _ in range(samples):
        labels = [int(v) + 1 for v in gen.choice(g.n, size=6, replace=False)]
        if f_membership(g, labels)[1]:
            hits += 1
    return Fraction(hits, samples)


# -- alternating 3-paths -------------------------------------------------


def alternating_3path_count(g: Hypergraph) -> int:
    """Ordered distinct 4-tuples (v, w, v', w') with a_vw = a_v'w' != a_v'w."""
    if g.r != 2:
        raise PreconditionError("needs a graph (r=2)")
    n = g.n
    adj = np.zeros((n + 1, n + 1), dtype=np.int8)
    for e in g.edges:
        verts = [v + 1 for v in range(n) if e >> v & 1]
        adj[verts[0], verts[1]] = adj[verts[1], verts[0]] = 1
    total = 0
    for v in range(1, n + 1):
        for vp in range(1, n + 1):
            if vp == v:
                continue
            # w' candidates with a_v'w' = c, excluding v, v'
            ones = int(np.sum(adj[vp, 1:])) - int(adj[vp, v])
            zeros = (n - 2) - ones
            for w in range(1, n + 1):
                if w in (v, vp):
                    continue
                c = adj[v, w]
                if adj[vp, w] == c:
                    continue
                count_wp = ones if c == 1 else zeros
                # w' != w never collides: a_v'w != c excludes w itself
                total += count_wp
    return total


# -- auxiliary graphs ----------------------------------------------------


@dataclass
class AuxiliaryGraph:
    """H built from (G, sigma) on the index set [k], k = n/2.

    For a graph: {i,j} is an edge when the 4-term adjacency sum is
    nonzero.  For a 3-graph: h is the 3-uniform version (8-term sum
    nonzero) and hprime thresholds the pair-degree sum at n/2.
    """

    base_n: int
    k: int
    sigma: list[int]
    h: Hypergraph
    hprime: Hypergraph | None = None


def _four_term(g: Hypergraph, sigma: list[int], i: int, j: int, k: int) -> int:
    return (
        g.a(sigma[i - 1], sigma[j - 1])
        - g.a(sigma[i - 1], sigma[j + k - 1])
        - g.a(sigma[i + k - 1], sigma[j - 1])
        + g.a(sigma[i + k - 1], sigma[j + k - 1])
    )


def _eight_term(g: Hypergraph, sigma: list[int], i: int, j: int, q: int, k: int) -> int:
    total = 0
    for b1, b2, b3 in itertools.product((0, 1), repeat=3):
        val = g.a(
            sigma[i - 1 + k * b1],
            sigma[j - 1 + k * b2],
            sigma[q - 1 + k * b3],
        )
        total += -val if (b1 + b2 + b3) % 2 else val
    return total


def _pair_degree_term(g: Hypergraph, sigma: list[int], i: int, j: int, k: int) -> int:
    return (
        g.pair_degree(sigma[i - 1], sigma[j - 1])
        - g.pair_degree(sigma[i + k - 1], sigma[j - 1])
        - g.pair_degree(sigma[i - 1], sigma[j + k - 1])
        + g.pair_degree(sigma[i + k - 1], sigma[j + k - 1])
    )


def build_auxiliary_H(g: Hypergraph, sigma: list[int]) -> AuxiliaryGraph:
    """H (and H' for 3-graphs) induced by the permutation sigma."""
    n = g.n
    if n % 2 != 0:
        raise PreconditionError("n must be even")
    if sorted(sigma) != list(range(1, n + 1)):
        raise PreconditionError("sigma is not a permutation of 1..n")
    k = n // 2
    if g.r == 2:
        edges = [
            (i, j)
            for i in range(1, k + 1)
            for j in range(i + 1, k + 1)
            if _four_term(g, sigma, i, j, k) != 0
        ]
        return AuxiliaryGraph(n, k, list(sigma), Hypergraph(2, k, edges))
    if g.r == 3:
        if k < 3:
            raise PreconditionError("needs n >= 6 for a 3-graph")
        edges3 = [
            (i, j, q)
            for i, j, q in itertools.combinations(range(1, k + 1), 3)
            if _eight_term(g, sigma, i, j, q, k) != 0
        ]
        # threshold is one-sided: the signed pair-degree sum must reach n/2
        edges2 = [
            (i, j)
            for i in range(1, k + 1)
            for j in range(i + 1, k + 1)
            if 2 * _pair_degree_term(g, sigma, i, j, k) >= n
        ]
        return AuxiliaryGraph(
            n, k, list(sigma), Hypergraph(3, k, edges3), Hypergraph(2, k, edges2)
        )
    raise PreconditionError("auxiliary graphs defined for r in {2,3}")


# -- greedy reveal procedures --------------------------------------------


class _LazySigma:
    """Uniform permutation revealed one assignment at a time."""

    def __init__(self, n: int, gen):
        self.n = n
        self.gen = gen
        self.idx_to_v: dict[int, int] = {}
        self.v_to_idx: dict[int, int] = {}

    def index_of(self, v: int) -> int:
        if v in self.v_to_idx:
            return self.v_to_idx[v]
        free = [i for i in range(1, self.n + 1) if i not in self.idx_to_v]
        i = free[int(self.gen.integers(0, len(free)))]
        self.idx_to_v[i] = v
        self.v_to_idx[v] = i
        return i

    def vertex_at(self, i: int) -> int:
        if i in self.idx_to_v:
            return self.idx_to_v[i]
        free = [v for v in range(1, self.n + 1) if v not in self.v_to_idx]
        v = free[int(self.gen.integers(0, len(free)))]
        self.idx_to_v[i] = v
        self.v_to_idx[v] = i
        return v

    def unrevealed_vertices(self) -> set[int]:
        return {v for v in range(1, self.n + 1) if v not in self.v_to_idx}

    def complete(self) -> list[int]:
        free_i = [i for i in range(1, self.n + 1) if i not in self.idx_to_v]
        free_v = [v for v in range(1, self.n + 1) if v not in self.v_to_idx]
        for pos in range(len(free_v) - 1, 0, -1):
            j = int(self.gen.integers(0, pos + 1))
            free_v[pos], free_v[j] = free_v[j], free_v[pos]
        for i, v in zip(free_i, free_v):
            self.idx_to_v[i] = v
            self.v_to_idx[v] = i
        return [self.idx_to_v[i] for i in range(1, self.n + 1)]


@dataclass
class ProcedureTrace:
    variant: str
    n: int
    k: int
    seed: int
    step_target: float
    pool: list
    steps: list[dict] = field(default_factory=list)
    matching: list[tuple[int, int]] = field(default_factory=list)
    sigma_final: list[int] = field(default_factory=list)

    def successes(self) -> int:
        return sum(1 for s in self.steps if s["success"])

    def to_json_lines(self) -> str:
        return "\n".join(json.dumps(s, sort_keys=True) for s in self.steps) + "\n"


def high_degree_set(g: Hypergraph) -> list[int]:
    """Vertices of degree at least 0.9 n, compared exactly."""
    return [v for v in range(1, g.n + 1) if 10 * g.vertex_degree(v) >= 9 * g.n]


def run_greedy_procedure(
    g: Hypergraph,
    variant: str,
    seed: int,
    step_budget: int | None = None,
    trial: int = 0,
) -> ProcedureTrace:
    """Reveal-as-you-go construction of a matching in H.

    variant "high_degree": pairs come from the set U of vertices with
    degree >= 0.9n (requires |U| >= 3); step limit
    T = min{(|U|-2)/4, 0.01n}.  variant "avoid_high_degree": pairs are
    the edges of a greedy matching S in the subgraph avoiding U
    (requires S nonempty); T = min{(|S|-1)/4, 0.01n}.  Steps run for
    t = 0, 1, ... while t <= T, unless step_budget overrides the count.

    Each step reveals i = sigma^{-1}(u), j = sigma^{-1}(w) for the
    lowest-labeled available pair (u, w); if both indices land in [k]
    and the partner positions i+k, j+k are still unrevealed, those are
    revealed too and {i,j} joins the matching exactly when the 4-term
    adjacency sum is nonzero.  Randomness enters only through the
    permutation reveals.
    """
    if g.r != 2:
        raise PreconditionError("greedy procedures need a graph (r=2)")
    n = g.n
    if n % 2 != 0:
        raise PreconditionError("n must be even")
    k = n // 2
    if variant == "high_degree":
        u_set = high_degree_set(g)
        if len(u_set) < 3:
            raise PreconditionError(
                f"high_degree variant needs |U| >= 3, got {len(u_set)}"
            )
        pool: list = sorted(u_set)
        step_target = min((len(u_set) - 2) / 4, 0.01 * n)
    elif variant == "avoid_high_degree":
        u_set = set(high_degree_set(g))
        inside = [
            tuple(sorted(e))
            for e in (g.edges_as_tuples())
            if e[0] not in u_set and e[1] not in u_set
        ]
        s_matching = [tuple(sorted(s)) for s in greedy_matching(inside)]
        if not s_matching:
            raise PreconditionError("avoid variant needs a nonempty matching S")
        pool = sorted(s_matching)
        step_target = min((len(pool) - 1) / 4, 0.01 * n)
    else:
        raise PreconditionError(f"unknown variant {variant!r}")

    gen = rng.stream(seed, "greedy", variant, trial)
    lazy = _LazySigma(n, gen)
    trace = ProcedureTrace(variant, n, k, seed, step_target, pool)
    max_steps = step_budget if step_budget is not None else math.floor(step_target) + 1

    for t in range(max_steps):
        unrevealed = lazy.unrevealed_vertices()
        q_t = sum(
            1
            for q in range(1, k + 1)
            if q in lazy.idx_to_v or q + k in lazy.idx_to_v
        )
        if variant == "high_degree":
            avail = [v for v in pool if v in unrevealed]
            pair = tuple(avail[:2]) if len(avail) >= 2 else None
        else:
            pair = next(
                (p for p in pool if p[0] in unrevealed and p[1] in unrevealed),
                None,
            )
        record = {
            "t": t,
            "unrevealed": len(unrevealed),
            "q_t": q_t,
            "pool_feasible": (4 * t + 2 <= len(pool))
            if variant == "high_degree"
            else (4 * t + 1 <= len(pool)),
            "pair": pair,
            "success": False,
            "reason": None,
        }
        if pair is None:
            record["reason"] = "no_available_pair"
            trace.steps.append(record)
            break
        u, w = pair
        i = lazy.index_of(u)
        j = lazy.index_of(w)
        record["i"] = i
        record["j"] = j
        if i > k or j > k:
            record["reason"] = "index_beyond_k"
        elif (i + k) in lazy.idx_to_v or (j + k) in lazy.idx_to_v:
            record["reason"] = "partner_already_revealed"
        else:
            up = lazy.vertex_at(i + k)
            wp = lazy.vertex_at(j + k)
            record["partners"] = [up, wp]
            s = g.a(u, w) - g.a(u, wp) - g.a(up, w) + g.a(up, wp)
            record["four_term"] = s
            if s != 0:
                record["success"] = True
                record["reason"] = "success"
                trace.matching.append((min(i, j), max(i, j)))
            else:
                record["reason"] = "not_h_edge"
        trace.steps.append(record)

    trace.sigma_final = lazy.complete()
    return trace


def matching_probability_experiment(
    g: Hypergraph, samples: int, seed: int, threshold: int = 1
) -> dict:
    """Distribution of the maximum matching size of H over random sigma.

    Reports the full histogram and the fraction of samples reaching the
    given threshold.
    """
    if g.r != 2:
        raise PreconditionError("needs a graph (r=2)")
    if g.n % 2 != 0:
        raise PreconditionError("n must be even")
    sizes: dict[int, int] = {}
    for s in range(samples):
        gen = rng.stream(seed, "mpe", s)
        sigma = rng.random_permutation(g.n, gen)
        aux = build_auxiliary_H(g, sigma)
        size = len(max_matching(aux.k, aux.h.edges_as_tuples()))
        sizes[size] = sizes.get(size, 0) + 1
    at_or_above = sum(c for sz, c in sizes.items() if sz >= threshold)
    return {
        "samples": samples,
        "seed": seed,
        "threshold": threshold,
        "sizes": {str(sz): c for sz, c in sorted(sizes.items())},
        "fraction_at_or_above": Fraction(at_or_above, samples),
    }


# -- induced variability -------------------------------------------------


def check_induced_variability(g: Hypergraph, k: int, budget: int | None = None):
    """Witness that k-subsets of a 2k-vertex r-graph are not all alike:
    a k-clique, a k-independent set, or two k-sets with different
    induced edge counts.  Returns None if no witness exists.
    """
    if g.n != 2 * k:
        raise PreconditionError("needs |V| = 2k")
    if k < g.r:
        raise PreconditionError("needs k >= r")
    budget_mod.charge("subsets", math.comb(g.n, k), budget)
    top = math.comb(k, g.r)
    first_seen: dict[int, int] = {}
    clique = None
    indep = None
    differing = None
    for combo in itertools.combinations(range(g.n), k):
        mask = 0
        for b in combo:
            mask |= 1 << b
        cnt = g.induced_count(mask)
        if cnt == top and clique is None:
            clique = mask
        if cnt == 0 and indep is None:
            indep = mask
        if differing is None:
            for prev_cnt, prev_mask in first_seen.items():
                if prev_cnt != cnt:
                    differing = (prev_mask, mask, prev_cnt, cnt)
                    break
            if cnt not in first_seen:
                first_seen[cnt] = mask
    if clique is not None:
        return {"kind": "clique", "vertices": list(vertices_of(clique))}
    if indep is not None:
        return {"kind": "independent_set", "vertices": list(vertices_of(indep))}
    if differing is not None:
        m1, m2, c1, c2 = differing
        return {
            "kind": "differing_pair",
            "first": list(vertices_of(m1)),
            "second": list(vertices_of(m2)),
            "counts": [c1, c2],
        }
    return None


# -- recognition of the two-sided family ----------------------------------


@dataclass
class StructureReport:
    verdict: str  # is_gabm | complement_is_gabm | not_f_free | indeterminate
    a_side: list[int] | None = None
    b_side: list[int] | None = None
    pairs: list[tuple[int, int]] | None = None
    bad_tuple: tuple | None = None

    def to_json_dict(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.a_side is not None:
            out["A"] = sorted(self.a_side)
            out["B"] = sorted(self.b_side)
            out["M"] = sorted(list(p) for p in self.pairs)
        if self.bad_tuple is not None:
            out["tuple"] = list(self.bad_tuple)
        return out


def _expected_gabm_edges(vertices: list[int], a_set: set, pairs: list) -> set:
    """Edge set of the two-sided form on the given vertices."""
    pair_masks = [mask_of(p) for p in pairs]
    edges = set()
    for tri in itertools.combinations(sorted(vertices), 3):
        in_a = sum(1 for v in tri if v in a_set)
        if in_a == 0 or in_a == 3:
            continue
        m = mask_of(tri)
        if any(m & pm == pm for pm in pair_masks):
            continue
        edges.add(m)
    return edges


def _derive_pairs(g: Hypergraph, vertices: list[int], a_set: set, b_set: set):
    """Pairs (a, b) for which every containing triple is a non-edge;
    None if they fail to form a partial matching."""
    others = sorted(vertices)
    pairs = []
    used: set[int] = set()
    for a in sorted(a_set):
        for b in sorted(b_set):
            if all(
                not g.has_edge(a, b, z) for z in others if z not in (a, b)
            ):
                if a in used or b in used:
                    return None
                pairs.append((a, b))
                used.update((a, b))
    return pairs


def _direct_bipartition_search(g: Hypergraph, vertices: list[int], min_side: int = 1):
    """Search all bipartitions of the given vertices for an exact match
    of the two-sided form.  Returns (a_list, b_list, pairs) or None."""
    verts = sorted(vertices)
    nv = len(verts)
    induced = {e for e in g.edges if e & ~mask_of(verts) == 0}
    for bits in range(1 << (nv - 1)):
        a_list = [verts[0]] + [verts[i] for i in range(1, nv) if bits >> (i - 1) & 1]
        a_set = set(a_list)
        b_list = [v for v in verts if v not in a_set]
        small = len(a_list) < min_side or len(b_list) < min_side
        if small and not (min_side == 1 and not b_list):
            continue
        b_set = set(b_list)
        pairs = _derive_pairs(g, verts, a_set, b_set)
        if pairs is None:
            continue
        if _expected_gabm_edges(verts, a_set, pairs) == induced:
            return a_list, b_list, pairs
    return None


def _pick_bstar(b_set: set, exclude: set, m_partner: dict, avoid_partners: set):
    for b in sorted(b_set):
        if b in exclude:
            continue
        if m_partner.get(b) in avoid_partners:
            continue
        return b
    return None


def _verified_bad(g: Hypergraph, labels) -> tuple:
    s, good = f_membership(g, labels)
    if not good:
        raise AssertionError("internal: constructed tuple is not a violation")
    return tuple(labels)


def _extend_one(g: Hypergraph, a_list: list, b_list: list, pairs: list, v: int):
    """Extend G[A+B] = form(A,B,M) by vertex v per the inductive step.

    Returns ("ok", a_list, b_list, pairs) or ("bad", tuple).  Assumes
    |A|, |B| >= 5.
    """
    a_set, b_set = set(a_list), set(b_list)
    m_of: dict[int, int] = {}
    for a, b in pairs:
        m_of[a] = b
        m_of[b] = a

    def aa_edge():
        for x1, x2 in itertools.combinations(sorted(a_set), 2):
            if g.has_edge(v, x1, x2):
                return (x1, x2)
        return None

    def bb_edge():
        for y1, y2 in itertools.combinations(sorted(b_set), 2):
            if g.has_edge(v, y1, y2):
                return (y1, y2)
        return None

    aa = aa_edge()
    bb = bb_edge()
    if aa and bb:
        xa, xap = aa
        xb, xbp = bb
        # relabel so (xa, xb') and (xa', xb) avoid M
        if m_of.get(xa) == xbp or m_of.get(xap) == xb:
            xb, xbp = xbp, xb
        bstar = _pick_bstar(b_set, {xb, xbp}, m_of, {xa, xap})
        return "bad", _verified_bad(g, (v, bstar, xa, xb, xap, xbp))
    if aa and not bb:
        # v belongs on the B side: run the oriented step with roles swapped
        res = _extend_one_oriented(
            g, sorted(b_set), sorted(a_set), [(b, a) for a, b in pairs], v
        )
        if res[0] == "bad":
            return res
        _, new_b, new_a, swapped_pairs = res
        return "ok", new_a, new_b, [(a, b) for b, a in swapped_pairs]
    return _extend_one_oriented(g, a_list, b_list, pairs, v)


def _extend_one_oriented(g: Hypergraph, a_list: list, b_list: list, pairs: list, v: int):
    """v is to join the A side: no {v, a, a'} edges exist.  pairs are
    oriented (a, b) with a in a_list."""
    a_set, b_set = set(a_list), set(b_list)
    m_of: dict[int, int] = {}
    for a, b in pairs:
        m_of[a] = b
        m_of[b] = a

    def eq2_tuple(xa, xap, xb):
        """Labels (v, xb*, xb, xa*, xa, xa') with the M-avoidance side
        conditions of the second identity."""
        xbstar = next(
            b
            for b in sorted(b_set)
            if b != xb and m_of.get(b) not in (xa, xap)
        )
        xastar = next(
            a
            for a in sorted(a_set)
            if a not in (xa, xap) and m_of.get(a) not in (xb, xbstar)
        )
        return (v, xbstar, xb, xastar, xa, xap)

    # M must embed into the non-edges at v
    for xa, xb in pairs:
        if g.has_edge(v, xa, xb):
            xap = next(a for a in sorted(a_set) if a != xa)
            return "bad", _verified_bad(g, eq2_tuple(xa, xap, xb))

    # columns of Gamma \ M must be empty or full, and only at unmatched b
    full_cols = []
    for xb in sorted(b_set):
        partner = m_of.get(xb)
        col_in = []
        col_out = []
        for xa in sorted(a_set):
            if xa == partner:
                continue
            if g.has_edge(v, xa, xb):
                col_out.append(xa)
            else:
                col_in.append(xa)
        if col_in and partner is not None:
            # matched column must be otherwise edge-full
            xa0 = partner
            return "bad", _verified_bad(g, eq2_tuple(xa0, col_in[0], xb))
        if col_in and col_out:
            return "bad", _verified_bad(g, eq2_tuple(col_in[0], col_out[0], xb))
        if col_in and not col_out:
            full_cols.append(xb)

    if len(full_cols) >= 2:
        xb, xbp = full_cols[0], full_cols[1]
        xa, xap = sorted(a_set)[:2]
        bstar = _pick_bstar(b_set, {xb, xbp}, m_of, {xa, xap})
        return "bad", _verified_bad(g, (v, bstar, xa, xb, xap, xbp))

    xstar = full_cols[0] if full_cols else None

    # edges {v, b, b'} away from xstar must all be present
    for xb, xbp in itertools.combinations(sorted(b_set), 2):
        if xstar in (xb, xbp):
            continue
        if not g.has_edge(v, xb, xbp):
            cand_a = [a for a in sorted(a_set) if m_of.get(a) not in (xb, xbp)]
            xa, xap = cand_a[0], cand_a[1]
            if m_of.get(xa) == xbp or m_of.get(xap) == xb:
                xa, xap = xap, xa
            bstar = _pick_bstar(b_set, {xb, xbp}, m_of, {xa, xap})
            return "bad", _verified_bad(g, (v, bstar, xa, xb, xap, xbp))
    # and {v, b, xstar} must all be absent
    if xstar is not None:
        for xb in sorted(b_set):
            if xb == xstar:
                continue
            if g.has_edge(v, xb, xstar):
                cand_a = [a for a in sorted(a_set) if m_of.get(a) != xb]
                xa, xap = cand_a[0], cand_a[1]
                bstar = _pick_bstar(b_set, {xb, xstar}, m_of, {xa, xap})
                return "bad", _verified_bad(g, (v, bstar, xa, xb, xap, xstar))

    new_pairs = list(pairs) + ([(v, xstar)] if xstar is not None else [])
    return "ok", sorted(a_list + [v]), b_list, new_pairs


def _try_recognize(g: Hypergraph, seed: int):
    """("ok", A, B, M) if g equals the two-sided form; ("bad", tuple) on
    a verified violating 6-tuple; ("unknown", None) otherwise."""
    n = g.n
    verts = list(range(1, n + 1))
    if n <= 12:
        found = _direct_bipartition_search(g, verts)
        if found:
            return ("ok",) + found
        return "unknown", None

    seeds = [tuple(range(1, 13))]
    gen = rng.stream(seed, "gabm_seed")
    for _ in range(20):
        seeds.append(tuple(sorted(int(v) + 1 for v in gen.choice(n, size=12, replace=False))))
    for w in seeds:
        base = _direct_bipartition_search(g, list(w), min_side=5)
        if base is None:
            continue
        a_list, b_list, pairs = base
        ok = True
        for v in sorted(set(verts) - set(w)):
            if len(a_list) < 5 or len(b_list) < 5:
                ok = False
                break
            res = _extend_one(g, a_list, b_list, pairs, v)
            if res[0] == "bad":
                return "bad", res[1]
            _, a_list, b_list, pairs = res
        if not ok:
            continue
        a_set = set(a_list)
        if _expected_gabm_edges(verts, a_set, pairs) == set(g.edges):
            return "ok", a_list, b_list, pairs
    return "unknown", None


def recognize_gabm(g: Hypergraph, seed: int = 0, budget: int | None = None) -> StructureReport:
    """Decide whether g or its complement has the two-sided form, or
    exhibit a violating 6-tuple.

    Small inputs (n <= 12) get a complete bipartition search; larger
    ones a seeded base + one-vertex-at-a-time extension that mirrors the
    inductive structure argument, where every failed deduction yields a
    concrete 6-tuple that is re-verified against the raw edge set.  When
    neither succeeds the verdict is indeterminate (never a guess).
    """
    if g.r != 3:
        raise PreconditionError("recognition needs a 3-graph")
    if g.n < 3:
        raise PreconditionError("needs at least 3 vertices")
    for graph, verdict in ((g, "is_gabm"), (g.complement(), "complement_is_gabm")):
        status, *rest = _try_recognize(graph, seed)
        if status == "ok":
            a_list, b_list, pairs = rest
            return StructureReport(
                verdict, sorted(a_list), sorted(b_list), sorted(pairs)
            )
        if status == "bad":
            # a violating tuple in the complement violates g as well:
            # the signed sum negates under complementation
            return StructureReport("not_f_free", bad_tuple=rest[0])
    if g.n >= 6:
        if g.n <= 12:
            budget_mod.charge("tuples", math.perm(g.n, 6), budget)
            for labels in itertools.permutations(range(1, g.n + 1), 6):
                if f_membership(g, labels)[1]:
                    return StructureReport("not_f_free", bad_tuple=labels)
        else:
            budget_mod.charge("tuples", 100_000, budget)
            gen = rng.stream(seed, "gabm_fallback")
            for _ in range(100_000):
                labels = [int(v) + 1 for v in gen.choice(g.n, size=6, replace=False)]
                if f_membership(g, labels)[1]:
                    return StructureReport("not_f_free", bad_tuple=tuple(labels))
    return StructureReport("indeterminate")


# -- thresholded second-degree tuples -------------------------------------


def degree2_threshold_tuples(g: Hypergraph, budget: int | None = None) -> int:
    """Ordered distinct 4-tuples (x, x', y, y') whose signed pair-degree
    sum reaches n/2 (one-sided threshold)."""
    if g.r != 3:
        raise PreconditionError("needs a 3-graph")
    n = g.n
    budget_mod.charge("tuples", n ** 4, budget)
    deg = np.zeros((n + 1, n + 1), dtype=np.int64)
    for e in g.edges:
        verts = [v + 1 for v in range(n) if e >> v & 1]
        for u, w in itertools.permutations(verts, 2):
            deg[u, w] += 1
    total = 0
    for x in range(1, n + 1):
        for xp in range(1, n + 1):
            if xp == x:
                continue
            r_vec = deg[x, 1:] - deg[xp, 1:]
            keep = np.ones(n, dtype=bool)
            keep[x - 1] = keep[xp - 1] = False
            vals = 2 * r_vec[keep]
            # ordered (y, y') with vals[y] - vals[y'] >= n; y' = y always
            # fails the threshold so needs no exclusion
            sorted_vals = np.sort(vals)
            total += int(np.searchsorted(sorted_vals, vals - n, side="right").sum())
    return total
