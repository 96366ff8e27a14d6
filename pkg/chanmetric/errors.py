"""Exception hierarchy for chanmetric."""

from __future__ import annotations

from typing import Optional


class ChanmetricError(ValueError):
    pass


class ParseError(ChanmetricError):
    """Malformed input text, located by line and column (both 1-based)."""

    def __init__(
        self,
        message: str,
        *,
        line: Optional[int] = None,
        column: Optional[int] = None,
        source: Optional[str] = None,
    ) -> None:
        self.line = line
        self.column = column
        self.source = source
        where = ":".join(str(part) for part in (source, line, column) if part is not None)
        super().__init__(f"{where}: {message}" if where else message)


class ValidationError(ChanmetricError):
    """A value violates the invariants of its type (row sums, symmetry, positivity)."""


class DimensionError(ChanmetricError):
    """Size mismatch, non-square input or an index out of range."""


class GuardExceeded(ChanmetricError):
    """An exhaustive search was requested above its size guard."""


class NotRealizableError(ChanmetricError):
    pass


class MalformedCertificate(ChanmetricError):
    pass


__all__ = [
    "ChanmetricError",
    "DimensionError",
    "GuardExceeded",
    "MalformedCertificate",
    "NotRealizableError",
    "ParseError",
    "ValidationError",
]
