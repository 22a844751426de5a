"""Request and response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class DistributionRequest(BaseModel):
    graph_text: str
    k: int = Field(ge=0)
    ell: int | None = None
    mc_trials: int | None = Field(default=None, gt=0)
    seed: int | None = None
    threads: int = 1
    budget: int | None = None


class DistributionResponse(BaseModel):
    r: int
    n: int
    k: int
    exact: bool
    total: str | None = None
    counts: dict[str, str] | None = None
    probability: str | None = None
    probability_float: float | None = None
    stderr: float | None = None
    trials: int | None = None
    seed: int | None = None
    csv: str


class CoeffsRequest(BaseModel):
    graph_text: str
    sigma: list[int] | None = None
    seed: int | None = None


class Coefficient(BaseModel):
    indices: list[int]
    value: str
    display_value: str


class RankInfo(BaseModel):
    rank_lower_bound: int
    degree: int
    exact: bool
    matching: list[list[int]]


class CoeffsResponse(BaseModel):
    r: int
    n: int
    k: int
    sigma: list[int]
    seed: int | None = None
    coefficients: list[Coefficient]
    rank: RankInfo
    fallback_rank: int | None = None
    fallback_sets: list[list[int]] | None = None
    h_edges: list[list[int]] | None = None
    hprime_edges: list[list[int]] | None = None


class ClassifyRequest(BaseModel):
    graph_text: str
    seed: int = 0


class ClassifyResponse(BaseModel):
    verdict: str
    A: list[int] | None = None
    B: list[int] | None = None
    M: list[list[int]] | None = None
    tuple: list[int] | None = None


class ExperimentRequest(BaseModel):
    name: str
    config: dict


class HealthResponse(BaseModel):
    status: str
    package: str
    version: str
