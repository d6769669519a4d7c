"""Exception types shared across the package."""

from __future__ import annotations


class SpecError(ValueError):
    """A problem document or problem definition is invalid."""


class CapacityError(ValueError):
    """The problem has more variables than the region table may materialise."""


class InfeasibleError(ValueError):
    """The bounds carry zero probability for the order statistic."""


class BudgetExceeded(RuntimeError):
    """Rejection sampling used up its attempt budget without an accepted draw."""

    def __init__(self, attempts: int, budget: int, accepted: int = 0) -> None:
        self.attempts = attempts
        self.budget = budget
        self.accepted = accepted
        super().__init__(
            f"rejection sampling made {attempts:,} attempts without landing inside "
            f"the bounds (budget {budget:,}); {accepted} sample(s) completed"
        )
