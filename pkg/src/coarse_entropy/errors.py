"""Shared exception types."""


class InvalidPointError(ValueError):
    """Point does not structurally fit the space (bad chart or dimension)."""


class SpaceMismatchError(ValueError):
    """Two objects that must share a space do not."""


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured point/orbit budget."""

    def __init__(self, message, requested=None, budget=None):
        super().__init__(message)
        self.requested = requested
        self.budget = budget
