"""Shared exception types."""


class LatpackError(Exception):
    """Base class for all latpack errors."""


class InputError(LatpackError):
    """Invalid user input (bad vector, bad parameters)."""


class ResourceBudgetError(LatpackError):
    """An enumeration would exceed the configured node budget."""

    def __init__(self, message, estimate=None, budget=None):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget
