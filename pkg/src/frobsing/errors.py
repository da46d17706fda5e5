"""Exception types and the global effort budgets."""

from __future__ import annotations

import os
from dataclasses import dataclass


class FrobsingError(Exception):
    """Base class for all library errors."""


class ParseError(FrobsingError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class SizingError(FrobsingError, OverflowError):
    """An exponent left the supported machine-word range."""


class BudgetExceeded(FrobsingError):
    """A computation needed more effort than the configured budget allows."""

    def __init__(self, message: str, required: int | None = None):
        self.required = required
        super().__init__(message)


class InvalidInput(FrobsingError, ValueError):
    pass


@dataclass(frozen=True)
class Budget:
    dimension: int = 2_000_000
    pairs: int = 50_000
    transcript_dimension: int = 20_000


def _parse_budget(text: str) -> Budget:
    text = text.strip()
    if not text:
        return Budget()
    if text.isdigit():
        return Budget(dimension=int(text))
    fields = {}
    aliases = {"dim": "dimension", "dimension": "dimension", "pairs": "pairs",
               "transcript": "transcript_dimension"}
    for chunk in text.split(","):
        key, _, value = chunk.partition("=")
        key = key.strip().lower()
        if key not in aliases or not value.strip().isdigit():
            raise InvalidInput(f"bad FROBSING_BUDGET entry {chunk!r}")
        fields[aliases[key]] = int(value)
    return Budget(**fields)


def current_budget() -> Budget:
    """Budget from the FROBSING_BUDGET environment variable, else defaults.

    Accepted forms: ``"500000"`` (dimension only) or
    ``"dim=500000,pairs=2000,transcript=4096"``.
    """
    return _parse_budget(os.environ.get("FROBSING_BUDGET", ""))
