"""
Exception hierarchy for exciton invariants.

Every exception also derives from ValueError so callers that catch the builtin
keep working. The CLI maps InputError to exit code 2 and GuardLimitError to
exit code 3.
"""

from typing import Optional


class ExcitonError(Exception):
    """Root of all errors raised by this package."""


class InputError(ExcitonError, ValueError):
    """User-supplied input could not be used."""


class GraphFormatError(InputError):
    """
    Graph text in edge-list, hex or graph6 form is malformed.

    Attributes:
        line_number (Optional[int]): 1-based line of the offending input, if known
    """

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class CatalogError(InputError):
    """A graph catalog cannot be compared (too few graphs, mixed vertex counts)."""


class GuardLimitError(ExcitonError, ValueError):
    """
    A configured size guard refused the requested computation.

    Attributes:
        limit (int): The configured limit
        requested (int): The size that was asked for
    """

    def __init__(self, message: str, limit: int, requested: int):
        self.limit = limit
        self.requested = requested
        super().__init__(message)


class ConfigurationError(ExcitonError, ValueError):
    """Settings read from the environment are invalid."""
