"""HTTP service exposing the package operations.

The CLI talks to this app in-process by default; `anticonc serve` runs
it over the network.  Domain errors map to HTTP 400 with a structured
detail carrying the error kind, which clients translate to exit codes.
"""

from __future__ import annotations

import secrets
from fractions import Fraction
from importlib import metadata

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import coupling, distribution, experiments, polynomials, structure
from ..errors import AnticoncError, PreconditionError
from ..hypergraph import parse_graph_text
from ..rng import random_permutation, stream
from .schemas import (
    ClassifyRequest,
    ClassifyResponse,
    CoeffsRequest,
    CoeffsResponse,
    DistributionRequest,
    DistributionResponse,
    ExperimentRequest,
    HealthResponse,
)

app = FastAPI(title="anticonc", docs_url=None, redoc_url=None)


@app.exception_handler(AnticoncError)
async def _domain_error(request: Request, exc: AnticoncError):
    detail = {"kind": exc.kind, "message": str(exc)}
    line = getattr(exc, "line", None)
    if line is not None:
        detail["line"] = line
    return JSONResponse(status_code=400, content={"detail": detail})


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    try:
        version = metadata.version("anticonc")
    except metadata.PackageNotFoundError:
        version = "unknown"
    return HealthResponse(status="ok", package="anticonc", version=version)


@app.post("/v1/distribution", response_model=DistributionResponse, response_model_exclude_none=True)
def post_distribution(req: DistributionRequest) -> DistributionResponse:
    g = parse_graph_text(req.graph_text)
    if req.threads not in (1, 4):
        raise PreconditionError("threads must be 1 or 4")
    if req.mc_trials is not None:
        seed = req.seed if req.seed is not None else secrets.randbits(32)
        if req.ell is not None:
            est, err = distribution.monte_carlo_probability(
                g, req.k, req.ell, req.mc_trials, seed, threads=req.threads
            )
            csv = "ell,estimate,stderr\n" + f"{req.ell},{est!r},{err!r}\n"
            return DistributionResponse(
                r=g.r, n=g.n, k=req.k, exact=False,
                probability_float=est, stderr=err,
                trials=req.mc_trials, seed=seed, csv=csv,
            )
        res = distribution.mc_distribution(
            g, req.k, req.mc_trials, seed, threads=req.threads
        )
        counts = {str(l): str(c) for l, c in sorted(res.counts.items())}
        csv_lines = ["ell,count,estimate,stderr"]
        for l, c in sorted(res.counts.items()):
            est = c / res.trials
            err = (est * (1 - est) / res.trials) ** 0.5
            csv_lines.append(f"{l},{c},{est!r},{err!r}")
        return DistributionResponse(
            r=g.r, n=g.n, k=req.k, exact=False, total=str(res.trials),
            counts=counts, trials=res.trials, seed=seed,
            csv="\n".join(csv_lines) + "\n",
        )
    table = distribution.exact_distribution(
        g, req.k, budget=req.budget, threads=req.threads
    )
    if req.ell is not None:
        prob = table.probability(req.ell)
        return DistributionResponse(
            r=g.r, n=g.n, k=req.k, exact=True,
            probability=str(prob), probability_float=float(prob),
            csv=f"ell,probability\n{req.ell},{prob}\n",
        )
    d = table.to_json_dict()
    return DistributionResponse(
        r=g.r, n=g.n, k=req.k, exact=True, total=d["total"], counts=d["counts"],
        csv=table.to_csv(),
    )


@app.post("/v1/coeffs", response_model=CoeffsResponse, response_model_exclude_none=True)
def post_coeffs(req: CoeffsRequest) -> CoeffsResponse:
    g = parse_graph_text(req.graph_text)
    if g.n % 2 != 0:
        raise PreconditionError("n must be even")
    seed = None
    if req.sigma is not None:
        sigma = req.sigma
        if sorted(sigma) != list(range(1, g.n + 1)):
            raise PreconditionError("sigma is not a permutation of 1..n")
    else:
        seed = req.seed if req.seed is not None else secrets.randbits(32)
        sigma = random_permutation(g.n, stream(seed, "coeffs"))
    f = coupling.extract_coefficients(g, sigma)
    coeffs = []
    # both coefficient layers carry the same 1/2^r factor
    scale = coupling.display_scale(g.r)
    for idx in sorted(f.coeffs, key=lambda i: (len(i), tuple(sorted(i)))):
        val = f.coeffs[idx]
        coeffs.append(
            {
                "indices": sorted(idx),
                "value": str(val),
                "display_value": str(val * scale),
            }
        )
    d = f.degree()
    cert = polynomials.compute_rank(f, d)
    out = {
        "r": g.r,
        "n": g.n,
        "k": g.n // 2,
        "sigma": list(sigma),
        "seed": seed,
        "coefficients": coeffs,
        "rank": {
            "rank_lower_bound": cert.rank_lower_bound,
            "degree": cert.degree,
            "exact": cert.exact,
            "matching": [list(s) for s in cert.matching],
        },
    }
    if g.r == 3:
        fb_rank, fb_sets = polynomials.fallback_rank(f, d) if d >= 1 else (0, [])
        aux = structure.build_auxiliary_H(g, sigma)
        out["fallback_rank"] = fb_rank
        out["fallback_sets"] = [list(s) for s in fb_sets]
        out["h_edges"] = [list(e) for e in aux.h.edges_as_tuples()]
        out["hprime_edges"] = [list(e) for e in aux.hprime.edges_as_tuples()]
    return CoeffsResponse(**out)


@app.post("/v1/classify", response_model=ClassifyResponse, response_model_exclude_none=True)
def post_classify(req: ClassifyRequest) -> ClassifyResponse:
    g = parse_graph_text(req.graph_text)
    report = structure.recognize_gabm(g, seed=req.seed)
    return ClassifyResponse(**report.to_json_dict())


@app.post("/v1/experiment")
def post_experiment(req: ExperimentRequest) -> dict:
    return experiments.run_experiment(req.name, req.config)
