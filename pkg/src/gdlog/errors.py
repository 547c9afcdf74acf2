from __future__ import annotations

from dataclasses import dataclass


class GdlogError(Exception):
    """Base class for every error raised by the engine."""


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    col_start: int
    col_end: int

    def __post_init__(self):
        if self.line < 1 or self.col_start < 1 or self.col_end < self.col_start:
            raise ValueError(f"invalid span {self.line}:{self.col_start}-{self.col_end}")

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col_start}-{self.col_end}"


class InputError(GdlogError):
    """Bad user input; carries a SourceSpan when one is known."""

    def __init__(self, message: str, span: SourceSpan | None = None):
        self.span = span
        super().__init__(f"{span}: {message}" if span else message)


class ParseError(InputError):
    pass


class SafetyError(InputError):
    pass


class ArityError(InputError):
    pass


class DistributionError(InputError):
    pass


class InconsistentChoices(GdlogError):
    pass


class NotStratifiedError(GdlogError):
    pass


class CapacityError(GdlogError):
    pass


class TruncationError(GdlogError):
    """An operation needs exhaustive results but the exploration was truncated."""
