"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument violates a mathematical precondition (wrong sign, range, order)."""


class ConvergenceError(RuntimeError):
    """The iterative eigensolver failed to converge; the input is pathological."""
