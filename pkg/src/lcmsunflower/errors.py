"""Exception hierarchy shared by every module."""

from __future__ import annotations


class LcmSunflowerError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(LcmSunflowerError, ValueError):
    """An argument violates a documented precondition."""


class OutOfRangeError(InvalidInputError):
    """A query range falls outside the precomputed table."""


class DomainError(InvalidInputError):
    """A real parameter lies outside the domain of a formula."""


class GroundSetOverflowError(InvalidInputError):
    """A set family would need more than 64 ground elements."""


class ResourceLimitError(LcmSunflowerError):
    """A configured memory or enumeration cap would be exceeded."""


class ShortfallError(LcmSunflowerError):
    """Greedy bucketing completed fewer blocks than requested."""

    def __init__(self, message: str, achieved: int):
        super().__init__(message)
        self.achieved = achieved
