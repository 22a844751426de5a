"""Named experiment runners with validated configs and CSV emission.

Five experiments: "matching" (auxiliary-graph matching sizes over random
permutations), "greedy" (reveal-procedure success statistics), "mnv-trend"
(max point probability of random sign polynomials across rank buckets),
"hypercontractivity" (noise-operator moment comparisons on random
harmonic polynomials), and "patterns" (coloring pattern finders).

Every report echoes its validated config including the seed, so a run is
reproducible from the report alone.  All numeric report fields are JSON
friendly; exact rationals are emitted as strings.
"""

from __future__ import annotations

import itertools
import statistics
from fractions import Fraction

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from . import harmonic, ramsey, rng, structure
from .errors import ParseError, PreconditionError
from .hypergraph import (
    Hypergraph,
    complete_graph,
    empty_graph,
    make_complete_bipartite,
    make_gabm,
    make_random,
    parse_graph_text,
)
from .polynomials import MultilinearPolynomial, compute_rank


# -- graph specs -----------------------------------------------------------


class GraphSpec(BaseModel):
    """Declarative graph description used inside experiment configs."""

    kind: str
    r: int = 2
    n: int = 0
    a: int = 0
    b: int = 0
    hubs: int = 0
    model: str = "uniform-p"
    p: float = 0.5
    edge_count: int | None = None
    seed: int = 0
    text: str | None = None


def build_graph(spec: GraphSpec) -> Hypergraph:
    if spec.kind == "empty":
        return empty_graph(spec.r, spec.n)
    if spec.kind == "complete":
        return complete_graph(spec.r, spec.n)
    if spec.kind == "complete_bipartite":
        return make_complete_bipartite(spec.a, spec.b, spec.r)
    if spec.kind == "random":
        return make_random(
            spec.r, spec.n, spec.model, spec.seed, p=spec.p, edge_count=spec.edge_count
        )
    if spec.kind == "hub":
        # spec.hubs vertices adjacent to everything, the rest independent
        edges = [
            (u, w)
            for u in range(1, spec.hubs + 1)
            for w in range(u + 1, spec.n + 1)
        ]
        return Hypergraph(2, spec.n, edges)
    if spec.kind == "text":
        if spec.text is None:
            raise PreconditionError("graph spec kind 'text' needs a text field")
        return parse_graph_text(spec.text)
    raise PreconditionError(f"unknown graph spec kind {spec.kind!r}")


# -- configs ---------------------------------------------------------------


class MatchingConfig(BaseModel):
    graph: GraphSpec
    samples: int = Field(gt=0)
    seed: int
    threshold: int = 1


class GreedyConfig(BaseModel):
    graph: GraphSpec
    variant: str
    runs: int = Field(gt=0)
    seed: int
    step_budget: int | None = None


class MnvTrendConfig(BaseModel):
    ranks: list[int] = [1, 2, 4, 8, 16]
    polys_per_bucket: int = Field(default=200, gt=0)
    samples: int = Field(default=100_000, gt=0)
    seed: int = 0


class HypercontractivityConfig(BaseModel):
    n: int = Field(ge=4)
    count: int = Field(gt=0)
    degree: int = 2
    q: int = 4
    seed: int = 0


class PatternsConfig(BaseModel):
    coloring_seed: int = 0
    n: int = 12
    r: int = 3
    p_red: float = 0.5
    bipartite_q: int | None = 1
    unavoidable_t: int | None = 2
    mixed_alpha: str | None = None  # Fraction string, e.g. "1/4"
    clique_size: int | None = None
    seed: int = 0


_CONFIG_TYPES = {
    "matching": MatchingConfig,
    "greedy": GreedyConfig,
    "mnv-trend": MnvTrendConfig,
    "hypercontractivity": HypercontractivityConfig,
    "patterns": PatternsConfig,
}

EXPERIMENT_NAMES = tuple(_CONFIG_TYPES)


# -- runners ----------------------------------------------------------------


def run_matching(cfg: MatchingConfig) -> dict:
    g = build_graph(cfg.graph)
    rep = structure.matching_probability_experiment(
        g, cfg.samples, cfg.seed, threshold=cfg.threshold
    )
    frac = rep["fraction_at_or_above"]
    return {
        "experiment": "matching",
        "config": cfg.model_dump(),
        "seed": cfg.seed,
        "sizes": rep["sizes"],
        "threshold": cfg.threshold,
        "fraction_at_or_above": str(frac),
        "fraction_at_or_above_float": float(frac),
        "csv": [["size", "count"]]
        + [[sz, cnt] for sz, cnt in rep["sizes"].items()],
    }


def run_greedy(cfg: GreedyConfig) -> dict:
    g = build_graph(cfg.graph)
    successes = attempted = 0
    matched_runs = 0
    size_hist: dict[int, int] = {}
    rows = [["run", "t", "reason", "success"]]
    for t in range(cfg.runs):
        tr = structure.run_greedy_procedure(
            g, cfg.variant, cfg.seed, step_budget=cfg.step_budget, trial=t
        )
        if tr.matching:
            matched_runs += 1
        size_hist[len(tr.matching)] = size_hist.get(len(tr.matching), 0) + 1
        for s in tr.steps:
            if s["reason"] != "no_available_pair":
                attempted += 1
                successes += int(s["success"])
            rows.append([t, s["t"], s["reason"], int(s["success"])])
    rate = Fraction(successes, attempted) if attempted else Fraction(0)
    frac_matched = Fraction(matched_runs, cfg.runs)
    return {
        "experiment": "greedy",
        "config": cfg.model_dump(),
        "seed": cfg.seed,
        "runs": cfg.runs,
        "attempted_steps": attempted,
        "successes": successes,
        "per_step_success_rate": str(rate),
        "per_step_success_rate_float": float(rate),
        "fraction_with_matching": str(frac_matched),
        "fraction_with_matching_float": float(frac_matched),
        "matching_size_histogram": {str(k): v for k, v in sorted(size_hist.items())},
        "csv": rows,
    }


def random_sign_polynomial(rank: int, gen) -> MultilinearPolynomial:
    """Quadratic with the given rank: a random perfect pairing of 2*rank
    variables with random nonzero integer coefficients."""
    m = 2 * rank
    perm = [int(v) + 1 for v in gen.permutation(m)]
    coeffs = {}
    for i in range(rank):
        c = int(gen.integers(1, 4)) * (1 if gen.random() < 0.5 else -1)
        coeffs[(perm[2 * i], perm[2 * i + 1])] = c
    return MultilinearPolynomial(m, coeffs)


def _empirical_max_point(poly: MultilinearPolynomial, samples: int, gen) -> float:
    """Empirical max point probability over uniform sign vectors,
    evaluated in vectorized blocks."""
    terms = [(tuple(k), int(c)) for k, c in poly.coeffs.items()]
    counts: dict[int, int] = {}
    block = 65536
    done = 0
    while done < samples:
        take = min(block, samples - done)
        signs = gen.integers(0, 2, size=(take, poly.m), dtype=np.int64) * 2 - 1
        vals = np.zeros(take, dtype=np.int64)
        for idx, c in terms:
            prod = np.ones(take, dtype=np.int64)
            for i in idx:
                prod *= signs[:, i - 1]
            vals += c * prod
        uniq, cnt = np.unique(vals, return_counts=True)
        for u, c in zip(uniq.tolist(), cnt.tolist()):
            counts[u] = counts.get(u, 0) + c
        done += take
    return max(counts.values()) / samples


def run_mnv_trend(cfg: MnvTrendConfig) -> dict:
    medians = {}
    rows = [["rank", "median_max_point_probability"]]
    for rank in cfg.ranks:
        probs = []
        for i in range(cfg.polys_per_bucket):
            gen = rng.stream(cfg.seed, "mnv", rank, i)
            poly = random_sign_polynomial(rank, gen)
            cert = compute_rank(poly, 2)
            if cert.rank_lower_bound != rank:
                raise AssertionError("internal: bucket polynomial has wrong rank")
            probs.append(_empirical_max_point(poly, cfg.samples, gen))
        med = statistics.median(probs)
        medians[str(rank)] = med
        rows.append([rank, med])
    ordered = [medians[str(r)] for r in cfg.ranks]
    return {
        "experiment": "mnv-trend",
        "config": cfg.model_dump(),
        "seed": cfg.seed,
        "medians": medians,
        "non_increasing": all(
            ordered[i + 1] <= ordered[i] + 1e-12 for i in range(len(ordered) - 1)
        ),
        "csv": rows,
    }


def random_harmonic_polynomial(
    n: int, k: int, degree: int, gen, budget=None
) -> MultilinearPolynomial:
    """Harmonic projection of a random integer multilinear polynomial."""
    coeffs = {}
    for d in range(1, degree + 1):
        for idx in itertools.combinations(range(1, n + 1), d):
            if gen.random() < 0.3:
                coeffs[idx] = int(gen.integers(-3, 4))
    if not coeffs:
        coeffs[(1,)] = 1
    f = MultilinearPolynomial(n, coeffs)
    return harmonic.harmonic_project(f, n, k, budget)


def run_hypercontractivity(cfg: HypercontractivityConfig) -> dict:
    if cfg.n % 2 != 0:
        raise PreconditionError("n must be even (p = 1/2 slice)")
    k = cfg.n // 2
    violations = 0
    rows = [["index", "t", "lhs", "rhs", "holds"]]
    worst = 0.0
    for i in range(cfg.count):
        gen = rng.stream(cfg.seed, "hyper", i)
        g = random_harmonic_polynomial(cfg.n, k, cfg.degree, gen)
        if g.is_zero():
            continue
        rho = harmonic.hypercontractive_rho(cfg.n, Fraction(1, 2))
        t = harmonic.minimal_hypercontractive_time(cfg.q, rho)
        chk = harmonic.hypercontractivity_check(g, cfg.n, Fraction(1, 2), t, cfg.q)
        if not chk["holds"]:
            violations += 1
        if chk["rhs"] > 0:
            worst = max(worst, chk["lhs"] / chk["rhs"])
        rows.append([i, t, chk["lhs"], chk["rhs"], int(chk["holds"])])
    return {
        "experiment": "hypercontractivity",
        "config": cfg.model_dump(),
        "seed": cfg.seed,
        "count": cfg.count,
        "violations": violations,
        "worst_ratio": worst,
        "csv": rows,
    }


def run_patterns(cfg: PatternsConfig) -> dict:
    c = ramsey.make_random_coloring(cfg.r, cfg.n, cfg.coloring_seed, p_red=cfg.p_red)
    out: dict = {
        "experiment": "patterns",
        "config": cfg.model_dump(),
        "seed": cfg.seed,
        "counts": c.counts(),
    }
    rows = [["finder", "found"]]
    if cfg.mixed_alpha is not None:
        alpha = Fraction(cfg.mixed_alpha)
        mixed = ramsey.mixed_degree_sets(c, alpha)
        out["mixed_degree_sets"] = [list(s) for s in mixed]
        out["mixed_count"] = len(mixed)
        rows.append(["mixed_degree_sets", len(mixed)])
    if cfg.bipartite_q is not None:
        w = ramsey.find_bipartite_pattern(c, cfg.bipartite_q)
        if w is None:
            out["bipartite_pattern"] = None
        else:
            v_sets, red, blue = w
            out["bipartite_pattern"] = {
                "v_sets": [list(vs) for vs in v_sets],
                "red": list(red),
                "blue": list(blue),
                "verified": ramsey.verify_bipartite_pattern(c, v_sets, red, blue),
            }
        rows.append(["bipartite_pattern", int(w is not None)])
    if cfg.unavoidable_t is not None:
        pw = ramsey.find_unavoidable_pattern(c, cfg.unavoidable_t)
        if pw is None:
            out["unavoidable_pattern"] = None
        else:
            d = pw.to_json_dict()
            d["verified"] = ramsey.verify_pattern_witness(c, pw)
            out["unavoidable_pattern"] = d
        rows.append(["unavoidable_pattern", int(pw is not None)])
    if cfg.clique_size is not None:
        cl = ramsey.monochromatic_clique(c, cfg.clique_size)
        out["monochromatic_clique"] = list(cl) if cl else None
        rows.append(["monochromatic_clique", int(cl is not None)])
    out["csv"] = rows
    return out


_RUNNERS = {
    "matching": run_matching,
    "greedy": run_greedy,
    "mnv-trend": run_mnv_trend,
    "hypercontractivity": run_hypercontractivity,
    "patterns": run_patterns,
}


def run_experiment(name: str, config: dict) -> dict:
    """Validate the config for the named experiment and run it."""
    if name not in _RUNNERS:
        raise ParseError(
            f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENT_NAMES)}"
        )
    try:
        cfg = _CONFIG_TYPES[name].model_validate(config)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "config"
        raise ParseError(f"invalid {name} config: {where}: {first['msg']}") from exc
    return _RUNNERS[name](cfg)


def report_to_csv(report: dict) -> str:
    """Render the report's tabular rows as CSV text."""
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in report.get("csv", []):
        writer.writerow(row)
    return buf.getvalue()
