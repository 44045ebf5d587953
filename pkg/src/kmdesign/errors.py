"""Exceptions shared across the toolkit."""


class KmError(Exception):
    """Base class for toolkit errors."""


class ClosureCapExceeded(KmError):
    """Group closure grew past the configured element cap.

    Usually means a mistyped generator, not a genuinely huge group.
    """


class GuardExceeded(KmError):
    """A combinatorial workload guard tripped (subset space or memory too large)."""


class DuplicateBlockError(KmError):
    """Two base blocks expand to overlapping orbits."""

    def __init__(self, first, second):
        self.first = tuple(first)
        self.second = tuple(second)
        super().__init__(
            f"base blocks {self.first} and {self.second} lie in the same orbit"
        )


class BudgetExceeded(KmError):
    """A node or time budget ran out before the search finished."""
