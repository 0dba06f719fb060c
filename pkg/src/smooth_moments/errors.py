"""Exception types shared across the toolkit."""

from __future__ import annotations


class SmoothMomentsError(Exception):
    """Base class for every error raised by this package."""


class CapacityError(SmoothMomentsError, ValueError):
    """An input exceeds a documented size limit (sieve length, grid size, ...)."""

    def __init__(self, what: str, value, limit):
        self.what = what
        self.value = value
        self.limit = limit
        super().__init__(f"{what}={value} exceeds the limit {limit}")


class DomainError(SmoothMomentsError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class ValidityError(SmoothMomentsError):
    """A theory hypothesis is violated and the caller asked for strict checking."""


class ConvergenceError(SmoothMomentsError, RuntimeError):
    """Grid refinement stopped at its size cap before reaching the tolerance."""

    def __init__(self, message: str, last: float, previous: float, N: int):
        self.last = last
        self.previous = previous
        self.N = N
        super().__init__(f"{message} (N={N}, last={last!r}, previous={previous!r})")


class BoundViolation(SmoothMomentsError, AssertionError):
    """An assertable bound (the trivial one) was exceeded by a computed moment."""
