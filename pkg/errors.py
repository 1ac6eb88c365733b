"""Exception hierarchy for co-minimal pair constructions and verification."""


class CominimalError(Exception):
    """Root of every error raised on purpose by this package."""


class PreconditionError(CominimalError, ValueError):
    """An operation was called outside its documented domain."""


class WindowOverflowError(CominimalError, OverflowError):
    """A window bound left the signed 64-bit range."""


class StabilizationError(CominimalError):
    """A tail membership predicate changed value on the scanned span."""

    def __init__(self, message: str, first_change: int | None = None):
        super().__init__(message)
        self.first_change = first_change


class ConstructionError(CominimalError):
    """A greedy construction could not meet its postcondition."""
