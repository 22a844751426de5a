"""Exception types shared by all modules.

Each maps to a stable CLI exit code and a service error kind, so callers
can dispatch on the class without parsing messages.
"""


class AnticoncError(Exception):
    """Base class for all package errors."""

    kind = "error"


class ParseError(AnticoncError):
    """Malformed input file or text. Carries a 1-based line number when known."""

    kind = "parse"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetExceededError(AnticoncError):
    """An enumeration would exceed its configured cap; refused up front."""

    kind = "budget"

    def __init__(self, budget_kind: str, required: int, limit: int):
        self.budget_kind = budget_kind
        self.required = required
        self.limit = limit
        super().__init__(
            f"{budget_kind} budget exceeded: need {required}, limit {limit}"
        )


class PreconditionError(AnticoncError):
    """Input violates an operation's stated precondition."""

    kind = "precondition"
