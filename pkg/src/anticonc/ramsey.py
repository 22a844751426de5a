"""Red-blue colorings of complete r-graphs and small pattern finders.

The finders run bounded exhaustive searches: they either return a
witness (always re-verified against the raw coloring by independent
predicate code) or None, which only means none was found within the
searched range, never that no witness exists.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import budget as budget_mod
from . import rng
from .errors import ParseError, PreconditionError
from .hypergraph import MAX_VERTICES, Hypergraph, all_rsets, mask_of, vertices_of

RED = "red"
BLUE = "blue"
UNCOLORED = "uncolored"


class TwoColoring:
    """Assignment of {red, blue, uncolored} to every r-set of {1..n}."""

    __slots__ = ("r", "n", "red", "blue", "uncolored")

    def __init__(self, r: int, n: int, red, blue, uncolored=None):
        if not 1 <= r <= n:
            raise PreconditionError(f"need 1 <= r <= n, got r={r}, n={n}")
        if n > MAX_VERTICES:
            raise PreconditionError(f"n={n} exceeds the {MAX_VERTICES}-vertex cap")
        red_set = frozenset(e if isinstance(e, int) else mask_of(e) for e in red)
        blue_set = frozenset(e if isinstance(e, int) else mask_of(e) for e in blue)
        universe = frozenset(all_rsets(n, r))
        for name, s in (("red", red_set), ("blue", blue_set)):
            if not s <= universe:
                raise PreconditionError(f"{name} contains a non r-set of 1..{n}")
        if red_set & blue_set:
            raise PreconditionError("an edge is both red and blue")
        rest = universe - red_set - blue_set
        if uncolored is None:
            unc = rest
        else:
            unc = frozenset(e if isinstance(e, int) else mask_of(e) for e in uncolored)
            if unc != rest:
                raise PreconditionError(
                    "uncolored set must be exactly the unassigned r-sets"
                )
        self.r = r
        self.n = n
        self.red = red_set
        self.blue = blue_set
        self.uncolored = unc

    @classmethod
    def from_graph(cls, g: Hypergraph) -> "TwoColoring":
        """Edges red, non-edges blue."""
        universe = frozenset(all_rsets(g.n, g.r))
        return cls(g.r, g.n, g.edges, universe - g.edges)

    def color_of(self, edge) -> str:
        m = edge if isinstance(edge, int) else mask_of(edge)
        if m in self.red:
            return RED
        if m in self.blue:
            return BLUE
        if m in self.uncolored:
            return UNCOLORED
        raise PreconditionError(f"{vertices_of(m)} is not an r-set of 1..{self.n}")

    def counts(self) -> dict:
        return {
            RED: len(self.red),
            BLUE: len(self.blue),
            UNCOLORED: len(self.uncolored),
        }

    def is_complete(self) -> bool:
        return not self.uncolored


def make_random_coloring(
    r: int, n: int, seed: int, p_red: float = 0.5, p_uncolored: float = 0.0
) -> TwoColoring:
    """Independent per-edge states: uncolored w.p. p_uncolored, else red
    w.p. p_red (renormalized over the colored mass)."""
    gen = rng.stream(seed, "coloring", r, n)
    red, blue, unc = [], [], []
    for m in all_rsets(n, r):
        u = gen.random()
        if u < p_uncolored:
            unc.append(m)
        elif gen.random() < p_red:
            red.append(m)
        else:
            blue.append(m)
    return TwoColoring(r, n, red, blue, unc)


# -- text format ---------------------------------------------------------
#
# Same as the graph format plus a state token per line:
#   "v1 ... vr X" with X in {R, B, U}.  Unlisted r-sets are uncolored.

_STATE = {"R": RED, "B": BLUE, "U": UNCOLORED}


def parse_coloring_text(text: str) -> TwoColoring:
    header = None
    r = n = 0
    seen: dict[int, str] = {}
    red, blue, unc = [], [], []
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
        if len(tokens) != r + 1:
            raise ParseError(f"expected {r} vertices and a state token", lineno)
        try:
            verts = [int(t) for t in tokens[:r]]
        except ValueError:
            raise ParseError("vertex ids must be integers", lineno)
        state = tokens[r].upper()
        if state not in _STATE:
            raise ParseError(f"state must be R, B or U, got {tokens[r]!r}", lineno)
        if any(not 1 <= v <= n for v in verts):
            raise ParseError(f"vertex out of range 1..{n}", lineno)
        if len(set(verts)) != r:
            raise ParseError("repeated vertex in edge", lineno)
        m = mask_of(verts)
        if m in seen:
            raise ParseError("duplicate edge", lineno)
        seen[m] = state
        {"R": red, "B": blue, "U": unc}[state].append(m)
    if header is None:
        raise ParseError("missing header line 'r n'")
    return TwoColoring(r, n, red, blue)


def coloring_to_text(c: TwoColoring) -> str:
    """Canonical serialization: every r-set listed with its state."""
    lines = [f"{c.r} {c.n}"]
    tag = {RED: "R", BLUE: "B", UNCOLORED: "U"}
    for m in all_rsets(c.n, c.r):
        verts = " ".join(str(v) for v in vertices_of(m))
        lines.append(f"{verts} {tag[c.color_of(m)]}")
    return "\n".join(lines) + "\n"


# -- mixed-degree sets ----------------------------------------------------


def alpha_r(r: int, eps: Fraction) -> Fraction:
    """(eps/3)^(4^r), exactly."""
    return (Fraction(eps) / 3) ** (4 ** r)


def mixed_degree_sets(
    c: TwoColoring, alpha: Fraction, budget: int | None = None
) -> list[tuple[int, ...]]:
    """(r-1)-sets contained in at least alpha*n red and alpha*n blue
    edges; the threshold comparison is exact rational."""
    alpha = Fraction(alpha)
    budget_mod.charge("subsets", math.comb(c.n, c.r - 1), budget)
    need = alpha * c.n
    out = []
    for combo in itertools.combinations(range(1, c.n + 1), c.r - 1):
        base = mask_of(combo)
        red_deg = blue_deg = 0
        for v in range(1, c.n + 1):
            bit = 1 << (v - 1)
            if bit & base:
                continue
            m = base | bit
            if m in c.red:
                red_deg += 1
            elif m in c.blue:
                blue_deg += 1
        if red_deg >= need and blue_deg >= need:
            out.append(combo)
    return out


# -- bipartite-style patterns (one red sink set, one blue sink set) -------


def _universal_sinks(c: TwoColoring, v_sets: list[tuple[int, ...]]):
    """Split the remaining vertices into those whose every transversal
    completion is red, every one blue, or neither."""
    used = {v for vs in v_sets for v in vs}
    red_univ, blue_univ = [], []
    for v in range(1, c.n + 1):
        if v in used:
            continue
        colors = set()
        for choice in itertools.product(*v_sets):
            if len(set(choice)) != len(choice):
                continue
            colors.add(c.color_of(choice + (v,)))
        if colors == {RED}:
            red_univ.append(v)
        elif colors == {BLUE}:
            blue_univ.append(v)
    return red_univ, blue_univ


def find_bipartite_pattern(c: TwoColoring, q: int):
    """Disjoint V_1..V_{r-1}, R, B, each of size q, with every edge
    {v_1..v_{r-1}, v} red when v in R and blue when v in B.

    Returns (v_sets, R, B) or None (absence within the searched range is
    not a disproof).  Exhaustive for q <= 2, n <= 20.
    """
    if c.r not in (2, 3):
        raise PreconditionError("pattern search supports r in {2, 3}")
    if q < 1 or c.n < (c.r + 1) * q:
        return None
    verts = range(1, c.n + 1)
    for combos in itertools.combinations(itertools.combinations(verts, q), c.r - 1):
        flat = [v for vs in combos for v in vs]
        if len(set(flat)) != len(flat):
            continue
        red_univ, blue_univ = _universal_sinks(c, list(combos))
        if len(red_univ) >= q and len(blue_univ) >= q:
            witness = (
                [tuple(vs) for vs in combos],
                tuple(red_univ[:q]),
                tuple(blue_univ[:q]),
            )
            if not verify_bipartite_pattern(c, *witness):
                raise AssertionError("internal: bipartite witness failed recheck")
            return witness
    return None


def verify_bipartite_pattern(c: TwoColoring, v_sets, red_set, blue_set) -> bool:
    """Independent recheck of the bipartite pattern conditions."""
    groups = [tuple(vs) for vs in v_sets] + [tuple(red_set), tuple(blue_set)]
    flat = [v for vs in groups for v in vs]
    if len(set(flat)) != len(flat):
        return False
    if len({len(vs) for vs in groups}) != 1:
        return False
    for v in red_set:
        for choice in itertools.product(*v_sets):
            if len(set(choice)) == len(choice):
                if c.color_of(tuple(choice) + (v,)) != RED:
                    return False
    for v in blue_set:
        for choice in itertools.product(*v_sets):
            if len(set(choice)) == len(choice):
                if c.color_of(tuple(choice) + (v,)) != BLUE:
                    return False
    return True


# -- unavoidable patterns --------------------------------------------------


@dataclass
class PatternWitness:
    """Disjoint V_1..V_r of equal size whose induced coloring depends
    only on the intersection profile of an edge, yet is not constant."""

    v_sets: list[tuple[int, ...]]
    color_table: dict  # f: tuple in [r]^r -> color or None when no edge fits

    def to_json_dict(self) -> dict:
        return {
            "sets": [list(vs) for vs in self.v_sets],
            "table": {
                ",".join(map(str, f)): col for f, col in sorted(self.color_table.items())
            },
        }


def _profile_classes(v_sets: list[tuple[int, ...]], r: int):
    """Edges inside the union, grouped by intersection profile."""
    union = sorted(v for vs in v_sets for v in vs)
    where = {}
    for idx, vs in enumerate(v_sets):
        for v in vs:
            where[v] = idx
    classes: dict[tuple, list] = {}
    for edge in itertools.combinations(union, r):
        prof = [0] * len(v_sets)
        for v in edge:
            prof[where[v]] += 1
        classes.setdefault(tuple(prof), []).append(edge)
    return classes


def find_unavoidable_pattern(c: TwoColoring, t: int) -> PatternWitness | None:
    """Disjoint V_1, V_2, V_3 of size t whose union is fully colored,
    each profile class monochromatic, union not monochromatic.

    For t = 1 the union spans a single triple, so the non-monochromatic
    clause is unsatisfiable and the search correctly returns None.
    """
    if c.r != 3:
        raise PreconditionError("unavoidable-pattern search supports r = 3")
    if t not in (1, 2):
        raise PreconditionError("t must be 1 or 2")
    if c.n < 3 * t:
        return None
    verts = range(1, c.n + 1)
    for vs1 in itertools.combinations(verts, t):
        s1 = set(vs1)
        for vs2 in itertools.combinations(verts, t):
            if min(vs2) < min(vs1) or s1 & set(vs2):
                continue
            # prune on the classes already determined by V1 and V2
            if not _classes_ok(c, [vs1, vs2]):
                continue
            s12 = s1 | set(vs2)
            for vs3 in itertools.combinations(verts, t):
                if min(vs3) < min(vs2) or s12 & set(vs3):
                    continue
                table = _classes_table(c, [vs1, vs2, vs3])
                if table is None:
                    continue
                seen = {col for col in table.values() if col is not None}
                if seen == {RED, BLUE}:
                    witness = PatternWitness([vs1, vs2, vs3], _function_table(table))
                    if not verify_pattern_witness(c, witness):
                        raise AssertionError("internal: pattern witness failed recheck")
                    return witness
    return None


def _classes_ok(c: TwoColoring, v_sets) -> bool:
    return _classes_table(c, v_sets) is not None


def _classes_table(c: TwoColoring, v_sets):
    """Profile -> color for all classes, or None if some class is mixed
    or touches an uncolored edge."""
    classes = _profile_classes(v_sets, c.r)
    table = {}
    for prof, edges in classes.items():
        colors = {c.color_of(e) for e in edges}
        if UNCOLORED in colors or len(colors) > 1:
            return None
        table[prof] = colors.pop()
    return table


def _function_table(profile_table: dict) -> dict:
    """Recast profile -> color as f -> color over all functions
    f: [r] -> [r]; f-classes sharing a profile share the color."""
    r = len(next(iter(profile_table)))
    out = {}
    for f in itertools.product(range(1, r + 1), repeat=r):
        prof = [0] * r
        for img in f:
            prof[img - 1] += 1
        out[f] = profile_table.get(tuple(prof))
    return out


def verify_pattern_witness(c: TwoColoring, w: PatternWitness) -> bool:
    """Independent recheck straight from the definition: iterate every
    function f and every labeled choice v_i in V_f(i)."""
    r = c.r
    if len(w.v_sets) != r:
        return False
    flat = [v for vs in w.v_sets for v in vs]
    if len(set(flat)) != len(flat):
        return False
    if len({len(vs) for vs in w.v_sets}) != 1:
        return False
    for f in itertools.product(range(1, r + 1), repeat=r):
        colors = set()
        for choice in itertools.product(*(w.v_sets[i - 1] for i in f)):
            if len(set(choice)) != r:
                continue
            colors.add(c.color_of(choice))
        if UNCOLORED in colors or len(colors) > 1:
            return False
        expected = w.color_table.get(f)
        if colors and colors != {expected}:
            return False
        if not colors and expected is not None:
            return False
    union_colors = {
        c.color_of(e)
        for e in itertools.combinations(sorted(flat), r)
    }
    return union_colors == {RED, BLUE}


# -- monochromatic cliques --------------------------------------------------


def monochromatic_clique(c: TwoColoring, size: int):
    """A vertex set of the given size whose r-sets are all one color, or
    None if the exhaustive search finds none."""
    if size < c.r:
        return tuple(range(1, size + 1)) if size <= c.n else None
    for color_set in (c.red, c.blue):
        found = _grow_clique(c, color_set, [], 1, size)
        if found is not None:
            for e in itertools.combinations(found, c.r):
                if mask_of(e) not in color_set:
                    raise AssertionError("internal: clique witness failed recheck")
            return found
    return None


def _grow_clique(c: TwoColoring, color_set, chosen: list, start: int, size: int):
    if len(chosen) == size:
        return tuple(chosen)
    # not enough vertices left to finish
    if c.n - start + 1 < size - len(chosen):
        return None
    for v in range(start, c.n + 1):
        if len(chosen) >= c.r - 1:
            ok = all(
                mask_of(e + (v,)) in color_set
                for e in itertools.combinations(chosen, c.r - 1)
            )
            if not ok:
                continue
        chosen.append(v)
        found = _grow_clique(c, color_set, chosen, v + 1, size)
        if found is not None:
            return found
        chosen.pop()
    return None
