"""Process-wide knobs: the enumeration budget and the default seed."""

from __future__ import annotations

import os
from math import comb

DEFAULT_BUDGET = 20_000_000
DEFAULT_SEED = 0

_budget: int | None = None


class BudgetExceeded(RuntimeError):
    """An exhaustive loop would exceed the configured subset budget."""


def get_budget() -> int:
    if _budget is not None:
        return _budget
    env = os.environ.get("DESIGN_IDEALS_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


def set_budget(value: int | None) -> None:
    global _budget
    if value is not None and value <= 0:
        raise ValueError("budget must be positive")
    _budget = value


def check_budget(count: int, what: str) -> None:
    budget = get_budget()
    if count > budget:
        raise BudgetExceeded(f"{what}: {count} subsets exceeds budget {budget}")


def check_binomial(n: int, r: int, what: str) -> int:
    count = comb(n, r)
    check_budget(count, what)
    return count
