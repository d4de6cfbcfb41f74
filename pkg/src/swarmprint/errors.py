"""Exception hierarchy shared across the package."""

from __future__ import annotations


class SwarmprintError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SwarmprintError, ValueError):
    """A value violates a documented invariant (bad range, missing field...)."""


class InputParseError(SwarmprintError, ValueError):
    """A text input (plan, profile, CSV) could not be parsed.

    Carries enough location information for a line/field diagnostic.
    """

    def __init__(self, message: str, *, source: str | None = None,
                 line: int | None = None, field: str | None = None):
        self.source = source
        self.line = line
        self.field = field
        prefix = ""
        if source is not None:
            prefix += f"{source}:"
        if line is not None:
            prefix += f"{line}:"
        if field is not None:
            prefix += f" field '{field}':"
        super().__init__(f"{prefix} {message}" if prefix else message)


class CatalogDataError(SwarmprintError):
    """A shipped data asset failed its checksum or structural check."""


class UnsupportedAlgorithmError(SwarmprintError):
    """The algorithm exists only as an estimation descriptor, not as code."""
