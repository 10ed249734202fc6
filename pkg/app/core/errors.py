"""Domain exceptions for polywitt, each carrying the CLI exit code it maps to."""

from typing import Optional


class PolywittError(Exception):
    """Base class for every error the library raises on purpose."""

    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class DomainError(PolywittError):
    """An argument lies outside the domain of an operation (e.g. n < 0)."""

    exit_code = 2


class PreconditionError(PolywittError):
    """A documented precondition does not hold."""

    exit_code = 2


class InputError(PolywittError):
    """A presentation or config input could not be parsed or validated."""

    exit_code = 2

    def __init__(self, detail: str, line: Optional[int] = None, column: Optional[int] = None):
        if line is not None:
            detail = f"{detail} (line {line}, column {column})"
        super().__init__(detail)
        self.line = line
        self.column = column


class CapExceededError(PolywittError):
    """An enumeration would exceed the configured size cap."""

    exit_code = 3

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds enumeration cap {cap}")
        self.size = size
        self.cap = cap


class TruncationOverflowError(PolywittError):
    """A result has terms above the truncation degree of its container."""

    exit_code = 2

    def __init__(self, degree: int, limit: int):
        super().__init__(f"term of degree {degree} exceeds truncation degree {limit}")
        self.degree = degree
        self.limit = limit


class InvariantViolation(PolywittError):
    """Two independent computations of the same quantity disagree."""

    exit_code = 1
