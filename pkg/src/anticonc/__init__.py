"""Anticoncentration toolkit for induced subgraph counts.

Core objects: hypergraphs with bitmask edge sets, the exact and sampled
law of the number of edges induced by a uniform random k-set, a coupling
that rewrites that count as a low-degree polynomial in random signs,
point-probability bounds through rank certificates and hypercontractivity
on the slice, greedy structure procedures, two-sided structure
recognition, and unavoidable-pattern search in coloured hypergraphs.
"""

from .budget import cap, charge
from .distribution import (
    DistributionTable,
    exact_distribution,
    mc_distribution,
    monte_carlo_probability,
    point_probability,
)
from .errors import (
    AnticoncError,
    BudgetExceededError,
    ParseError,
    PreconditionError,
)
from .hypergraph import (
    Hypergraph,
    complete_graph,
    empty_graph,
    induced_subgraph,
    make_complete_bipartite,
    make_gabm,
    make_random,
    parse_graph_text,
)

__all__ = [
    "AnticoncError",
    "BudgetExceededError",
    "DistributionTable",
    "Hypergraph",
    "ParseError",
    "PreconditionError",
    "cap",
    "charge",
    "complete_graph",
    "empty_graph",
    "exact_distribution",
    "induced_subgraph",
    "make_complete_bipartite",
    "make_gabm",
    "make_random",
    "mc_distribution",
    "monte_carlo_probability",
    "parse_graph_text",
    "point_probability",
]

__version__ = "0.1.0"
