"""Exception types shared across parsing and fold validation."""

from __future__ import annotations


class ParseError(ValueError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class FoldValidationError(ValueError):
    """A fold assignment violating the exact-partition contract."""
