"""Exception hierarchy for the noncommutative symmetric function toolkit."""

from typing import Any, Optional


class NsymError(Exception):
    """Base class for every error raised by this package."""


class DomainError(NsymError):
    """Raised when an argument lies outside the domain of an operation."""


class DegreeError(NsymError):
    """Raised when operands of different degrees are combined."""


class NotInvertibleError(NsymError):
    """Raised when a series or polynomial has no inverse under its truncation."""


class BoundError(NsymError):
    """Raised when a requested size exceeds the configured oracle bounds."""


class UnderflowError(NsymError):
    """Raised when a truncation order is too small for an exact comparison."""


class UsageError(NsymError):
    """Raised for malformed command-line input."""


class VerificationError(NsymError):
    """Raised when two independent computations of the same quantity disagree.

    Attributes:
        expected: value computed by the reference side
        actual: value computed by the side under test
    """

    def __init__(self, message: str, expected: Optional[Any] = None, actual: Optional[Any] = None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual
