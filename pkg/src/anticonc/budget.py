"""Enumeration budget caps.

Exhaustive operations state up front how much work they will do and refuse
(raising BudgetExceededError) if that exceeds the cap, rather than running
for an unbounded time.  Caps are keyed by the unit of work being counted:

  subsets   k-subsets of the vertex set visited by an exact enumeration
  graphs    (graph, subset) pairs visited by an exhaustive graph search
  points    slice / cube points visited by a polynomial evaluation sweep
  tuples    ordered vertex tuples visited by a structural scan
  flips     sign-vector evaluations (2^m times the term work)

Resolution order for the effective cap: explicit ``budget=`` argument,
then the ANTICONC_BUDGET environment variable (a single integer applied
to every kind), then the built-in default.
"""

import os

from .errors import BudgetExceededError

DEFAULT_CAPS = {
    "subsets": 2_000_000,
    "graphs": 2_000_000,
    "points": 2_000_000,
    "tuples": 729_000_000,
    "flips": 402_653_184,
}


def cap(kind: str, budget: int | None = None) -> int:
    """Effective cap for one budget kind."""
    if budget is not None:
        return budget
    env = os.environ.get("ANTICONC_BUDGET")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"ANTICONC_BUDGET must be an integer, got {env!r}")
    return DEFAULT_CAPS[kind]


def charge(kind: str, required: int, budget: int | None = None) -> None:
    """Refuse with BudgetExceededError if `required` units exceed the cap."""
    limit = cap(kind, budget)
    if required > limit:
        raise BudgetExceededError(kind, required, limit)
