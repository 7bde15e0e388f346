"""Shared typing helpers."""

from __future__ import annotations

from enum import StrEnum


class FrequencyModel(StrEnum):
    AFFINE = "affine"
    PROPORTIONAL = "proportional"


class SolutionVariant(StrEnum):
    """Which closed form to evaluate.

    ``exact`` solves the kinetic equation; ``published`` reproduces the printed
    formulas (layer shape ``mu - 2 mu^2/sqrt(5)``) for comparison.
    """

    EXACT = "exact"
    PUBLISHED = "published"


class Problem(StrEnum):
    TEMP_JUMP = "temp-jump"
    EVAPORATION = "evaporation"
    COMBINED = "combined"


class Side(StrEnum):
    PLUS = "+"
    MINUS = "-"

    @property
    def sign(self) -> float:
        return 1.0 if self is Side.PLUS else -1.0


class OutputFormat(StrEnum):
    CSV = "csv"
    JSON = "json"


class Acceleration(StrEnum):
    NONE = "none"
    AITKEN = "aitken"


__all__ = ["Acceleration", "FrequencyModel", "OutputFormat", "Problem", "Side", "SolutionVariant"]
