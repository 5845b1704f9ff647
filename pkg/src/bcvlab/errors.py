"""Shared exception types."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class SizeCapError(ValueError):
    """A size parameter exceeds a hard resource cap (never silently truncated)."""
