"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """A precondition of an operation is violated."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured size or memory cap."""
