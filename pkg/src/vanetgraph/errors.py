"""
Exceptions raised by vanetgraph. Every error is a ``ValueError`` so that
callers who do not care about the distinction can catch it generically.
"""

__all__ = [
    "VanetGraphError",
    "TraceParseError",
    "ValidationError",
    "DomainError",
    "ConfigError",
]

from typing import Optional


class VanetGraphError(ValueError):
    """Base class of all vanetgraph errors."""


class TraceParseError(VanetGraphError):
    """A malformed row or header in a trace or RSU file.

    **Attributes:**

    `line_number`: The 1-based line in the input stream, when known.
    """

    line_number: Optional[int]

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ValidationError(VanetGraphError):
    """An input violates a structural invariant, such as
    non-monotone timestamps or duplicate node ids."""


class DomainError(VanetGraphError):
    """A numerical input is out of range, or a quantity is undefined."""


class ConfigError(VanetGraphError):
    """An invalid configuration value.

    **Attributes:**

    `field_name`: The offending configuration key, when known.
    """

    field_name: Optional[str]

    def __init__(self, message: str, field_name: Optional[str] = None):
        self.field_name = field_name
        if field_name is not None:
            message = f"{field_name}: {message}"
        super().__init__(message)
