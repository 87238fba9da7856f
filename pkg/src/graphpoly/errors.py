"""Shared exception types."""

import os

DEFAULT_MAP_BUDGET = 10**9
BUDGET_ENV = "HOMOPOLY_BUDGET"


class Graph6Error(ValueError):
    """Malformed graph6 input.

    `line` is the 1-based line number when the record came from a file.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetError(RuntimeError):
    """An operation refused to run because it would exceed its enumeration budget."""


class DuplicateGraphError(ValueError):
    """Two isomorphic graphs were found in input that must be pairwise non-isomorphic."""


def map_budget() -> int:
    """Map-evaluation budget, overridable via the HOMOPOLY_BUDGET env var."""
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_MAP_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError(f"{BUDGET_ENV} must be positive, got {value}")
    return value


def check_budget(cost: int, what: str, budget: int | None = None) -> None:
    limit = map_budget() if budget is None else budget
    if cost > limit:
        raise BudgetError(f"{what} needs {cost} map evaluations, budget is {limit}")
