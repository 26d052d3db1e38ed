"""Exception types shared across the simulator."""


class InvalidInputError(ValueError):
    """An input violates a documented precondition or invariant."""


class NumericalError(RuntimeError):
    """A numerical procedure failed (non-convergence, overflow, singular system)."""
