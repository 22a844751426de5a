"""r-uniform hypergraphs on vertex set {1..n} with bitmask edge storage.

An edge is an int bitmask with bit v-1 set for each member vertex v, so
subset tests against a candidate vertex set are single AND operations.
Graphs are immutable; n is capped at 128 which is far beyond what any
exhaustive operation here can afford anyway.
"""

from __future__ import annotations

import itertools
from math import comb

from . import rng
from .errors import ParseError, PreconditionError

MAX_VERTICES = 128


def mask_of(vertices) -> int:
    """Bitmask of an iterable of 1-based vertex ids."""
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def vertices_of(mask: int) -> tuple[int, ...]:
    """Sorted 1-based vertex ids of a bitmask."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


def all_rsets(n: int, r: int):
    """All r-subsets of {1..n} as bitmasks, in lexicographic vertex order."""
    for combo in itertools.combinations(range(n), r):
        m = 0
        for v in combo:
            m |= 1 << v
        yield m


class Hypergraph:
    """Immutable r-uniform hypergraph."""

    __slots__ = ("r", "n", "edges")

    def __init__(self, r: int, n: int, edges=()):
        # n < r is allowed only for edgeless graphs (empty restrictions)
        if r < 1 or n < 0:
            raise PreconditionError(f"need r >= 1 and n >= 0, got r={r}, n={n}")
        if n > MAX_VERTICES:
            raise PreconditionError(f"n={n} exceeds the {MAX_VERTICES}-vertex cap")
        full = (1 << n) - 1
        edge_set = set()
        for e in edges:
            m = e if isinstance(e, int) else mask_of(e)
            if m & ~full:
                raise PreconditionError(f"edge {vertices_of(m)} outside 1..{n}")
            if m.bit_count() != r:
                raise PreconditionError(
                    f"edge {vertices_of(m)} has {m.bit_count()} vertices, expected {r}"
                )
            edge_set.add(m)
        self.r = r
        self.n = n
        self.edges = frozenset(edge_set)

    # -- basic queries -------------------------------------------------

    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, *vertices) -> bool:
        if len(vertices) == 1 and isinstance(vertices[0], int) and self.r != 1:
            # single int means a prebuilt mask
            return vertices[0] in self.edges
        return mask_of(vertices) in self.edges

    def a(self, *vertices) -> int:
        """0/1 edge indicator on distinct vertices."""
        return 1 if mask_of(vertices) in self.edges else 0

    def induced_count(self, subset_mask: int) -> int:
        """Number of edges contained in the given vertex subset."""
        return sum(1 for e in self.edges if e & subset_mask == e)

    def vertex_degree(self, v: int) -> int:
        bit = 1 << (v - 1)
        return sum(1 for e in self.edges if e & bit)

    def pair_degree(self, u: int, w: int) -> int:
        """Number of edges containing both u and w."""
        pair = mask_of((u, w))
        return sum(1 for e in self.edges if e & pair == pair)

    def neighbors(self, v: int) -> set[int]:
        if self.r != 2:
            raise PreconditionError("neighbors is for graphs (r=2)")
        bit = 1 << (v - 1)
        return {vertices_of(e ^ bit)[0] for e in self.edges if e & bit}

    def complement(self) -> "Hypergraph":
        universe = set(all_rsets(self.n, self.r))
        return Hypergraph(self.r, self.n, universe - self.edges)

    def edges_as_tuples(self) -> list[tuple[int, ...]]:
        return sorted(vertices_of(e) for e in self.edges)

    def __eq__(self, other):
        return (
            isinstance(other, Hypergraph)
            and (self.r, self.n, self.edges) == (other.r, other.n, other.edges)
        )

    def __hash__(self):
        return hash((self.r, self.n, self.edges))

    def __repr__(self):
        return f"Hypergraph(r={self.r}, n={self.n}, edges={self.edge_count()})"


# -- constructors ------------------------------------------------------


def empty_graph(r: int, n: int) -> Hypergraph:
    return Hypergraph(r, n, ())


def complete_graph(r: int, n: int) -> Hypergraph:
    return Hypergraph(r, n, all_rsets(n, r))


def make_complete_bipartite(a: int, b: int, r: int = 2) -> Hypergraph:
    """Complete bipartite r-graph: parts {1..a} and {a+1..a+b}, edges are
    all r-sets meeting both parts."""
    a_mask = (1 << a) - 1
    b_mask = ((1 << (a + b)) - 1) ^ a_mask
    edges = [
        m for m in all_rsets(a + b, r) if (m & a_mask) and (m & b_mask)
    ]
    return Hypergraph(r, a + b, edges)


def induced_subgraph(g: Hypergraph, vertices) -> Hypergraph:
    """Restriction to a vertex subset, relabeled 1..|A| by increasing
    original label; edges are exactly those of g inside the subset."""
    verts = sorted(set(vertices))
    if any(not 1 <= v <= g.n for v in verts):
        raise PreconditionError(f"vertices outside 1..{g.n}")
    sub_mask = mask_of(verts)
    relabel = {v: i + 1 for i, v in enumerate(verts)}
    edges = [
        tuple(relabel[v] for v in vertices_of(e))
        for e in g.edges
        if e & sub_mask == e
    ]
    return Hypergraph(g.r, len(verts), edges)


def make_gabm(a_side, b_side, pairs) -> Hypergraph:
    """3-graph on A ∪ B whose edges are the triples meeting both sides,
    except triples containing one of the given disjoint A-B pairs.

    A and B must partition {1..|A|+|B|}; pairs must lie in A x B and share
    no endpoints.
    """
    a_set, b_set = set(a_side), set(b_side)
    n = len(a_set) + len(b_set)
    if a_set & b_set:
        raise PreconditionError("A and B must be disjoint")
    if a_set | b_set != set(range(1, n + 1)):
        raise PreconditionError("A and B must partition {1..n}")
    used = set()
    pair_masks = []
    for x, y in pairs:
        if x not in a_set or y not in b_set:
            raise PreconditionError(f"pair ({x},{y}) not in A x B")
        if x in used or y in used:
            raise PreconditionError("pairs must be vertex-disjoint")
        used.update((x, y))
        pair_masks.append(mask_of((x, y)))
    a_mask = mask_of(a_set)
    b_mask = mask_of(b_set)
    edges = []
    for m in all_rsets(n, 3):
        if not (m & a_mask) or not (m & b_mask):
            continue
        if any(m & pm == pm for pm in pair_masks):
            continue
        edges.append(m)
    return Hypergraph(3, n, edges)


def make_random(r: int, n: int, model: str, seed: int, p=None, edge_count=None) -> Hypergraph:
    """Random r-graph; model "uniform-p" keeps each r-set independently with
    probability p, "fixed-edge-count" picks exactly edge_count r-sets.
    """
    gen = rng.stream(seed, "make_random", r, n, model)
    universe = list(all_rsets(n, r))
    if model == "uniform-p":
        if p is None:
            raise PreconditionError("uniform-p model needs p")
        keep = gen.random(len(universe)) < float(p)
        return Hypergraph(r, n, [m for m, k in zip(universe, keep) if k])
    if model == "fixed-edge-count":
        if edge_count is None:
            raise PreconditionError("fixed-edge-count model needs edge_count")
        if not 0 <= edge_count <= len(universe):
            raise PreconditionError(
                f"edge_count {edge_count} outside 0..{len(universe)}"
            )
        idx = gen.choice(len(universe), size=edge_count, replace=False)
        return Hypergraph(r, n, [universe[i] for i in sorted(idx)])
    raise PreconditionError(f"unknown random model {model!r}")


# -- text format -------------------------------------------------------
#
#   header line:  "r n"
#   edge lines:   r space-separated 1-based vertex ids
#   '#' starts a comment; blank lines ignored.


def parse_graph_text(text: str) -> Hypergraph:
    """Parse the graph text format; raises ParseError with a line number."""
    header = None
    edges = []
    edges_seen = set()
    r = n = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 2:
                raise ParseError("header must be 'r n'", lineno)
            try:
                r, n = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise ParseError("header must be two integers", lineno)
            if not 1 <= r <= n:
                raise ParseError(f"need 1 <= r <= n, got r={r}, n={n}", lineno)
            if n > MAX_VERTICES:
                raise ParseError(f"n={n} exceeds the {MAX_VERTICES}-vertex cap", lineno)
            header = (r, n)
            continue
        if len(tokens) != r:
            raise ParseError(f"expected {r} vertices, got {len(tokens)}", lineno)
        try:
            verts = [int(t) for t in tokens]
        except ValueError:
            raise ParseError("vertex ids must be integers", lineno)
        if any(not 1 <= v <= n for v in verts):
            raise ParseError(f"vertex out of range 1..{n}", lineno)
        if len(set(verts)) != r:
            raise ParseError("repeated vertex in edge", lineno)
        m = mask_of(verts)
        if m in edges_seen:
            raise ParseError("duplicate edge", lineno)
        edges_seen.add(m)
        edges.append(m)
    if header is None:
        raise ParseError("missing header line 'r n'")
    return Hypergraph(r, n, edges)


def to_text(g: Hypergraph) -> str:
    """Canonical serialization: header, then sorted edges, one per line."""
    lines = [f"{g.r} {g.n}"]
    for tup in g.edges_as_tuples():
        lines.append(" ".join(str(v) for v in tup))
    return "\n".join(lines) + "\n"


def total_rsets(n: int, r: int) -> int:
    return comb(n, r)
