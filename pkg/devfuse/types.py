# Needed for NotRequired with Python 3.8 - 3.10
# See https://www.python.org/dev/peps/pep-0655/#usage-in-python-3-11
from __future__ import annotations

__all__ = (
    "FusionError",
    "DomainError",
    "InvalidWeightsError",
    "DegenerateInputError",
    "ConvergenceError",
    "ShapeError",
    "BlockIndexError",
    "ImageDecodeError",
    "NoImagesError",
    "PenaltyWarning",
    "ImageWarning",
    "ExpertEntry",
    "PreferenceFile",
    "DecisionFile",
)

import sys
import warnings
from typing import List, Optional, Tuple

# Even though TypedDict is available in Python 3.8, because it's used with NotRequired,
# they should both come from the same typing module.
if sys.version_info >= (3, 11):
    from typing import NotRequired, TypedDict
else:
    from typing_extensions import NotRequired, TypedDict


class FusionError(Exception):
    """
    Base class for every error raised by devfuse.

    When the error happens while fusing one channel of one block, ``location`` holds
    the 1-based ``(alpha, beta, k)`` triple of that block channel.
    """

    def __init__(
        self, message: str, *, location: Optional[Tuple[int, ...]] = None
    ) -> None:
        super().__init__(message)
        self.message = message
        self.location = location

    def __str__(self) -> str:
        if self.location is None:
            return self.message
        if len(self.location) == 3:
            alpha, beta, k = self.location
            return f"{self.message} (block ({alpha}, {beta}), channel {k})"
        return f"{self.message} (at {self.location})"


class DomainError(FusionError, ValueError):
    """An input lies outside the domain of the operation (non-finite, negative, ...)."""


class InvalidWeightsError(FusionError, ValueError):
    """Weights are negative, non-finite, wrongly shaped, or all zero."""


class DegenerateInputError(FusionError, ArithmeticError):
    """A closed form hit a zero denominator."""


class ConvergenceError(FusionError, RuntimeError):
    """
    The bisection ran out of iterations before the bracket became narrower than the
    tolerance. ``bracket`` is the last ``(lo, hi)`` pair.
    """

    def __init__(
        self,
        message: str,
        bracket: Tuple[float, float],
        *,
        location: Optional[Tuple[int, ...]] = None,
    ) -> None:
        super().__init__(message, location=location)
        self.bracket = bracket


class ShapeError(FusionError, ValueError):
    """Dimensions of the operands don't fit together."""


class BlockIndexError(FusionError, IndexError):
    """A block or channel index is out of range."""


class ImageDecodeError(FusionError, OSError):
    """An image file could not be read or written."""


class NoImagesError(FusionError, ValueError):
    """An experiment directory holds no decodable image."""


class PenaltyWarning(RuntimeWarning):
    pass


class ImageWarning(RuntimeWarning):
    pass


# By default warnings are shown once; we want to always show them.
warnings.simplefilter("always", PenaltyWarning)
warnings.simplefilter("always", ImageWarning)


# Structure of the `decide` input file:
#   {"alternatives": 3, "experts": [{"name": "e1", "matrix": [[0.5, ...], ...]}, ...]}
class ExpertEntry(TypedDict):
    """One expert's pairwise preference matrix."""

    name: NotRequired[str]
    """Display name of the expert."""
    matrix: List[List[float]]
    """The ``p x p`` matrix; entry ``[i][j]`` is the preference of ``i`` over ``j``."""


class PreferenceFile(TypedDict):
    """Contents of a preference input file."""

    alternatives: int
    """Number of alternatives ``p``."""
    experts: List[ExpertEntry]
    """One entry per expert."""


class DecisionFile(TypedDict):
    """Contents of a decision output file."""

    collective: List[List[float]]
    """The collective matrix."""
    column: List[float]
    """The aggregational preference column."""
    ranking: List[int]
    """Alternatives (numbered from 1) from most to least preferred."""
