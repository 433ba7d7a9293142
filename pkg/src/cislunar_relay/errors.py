"""Exception types used across the package."""


class ValidationError(ValueError):
    """A config, genome, or parameter violates a documented bound."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to reach its tolerance."""
