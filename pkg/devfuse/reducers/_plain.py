"""Plain comparison reducers for a block channel."""

__all__ = (
    "AggregatorKind",
    "AggregatorId",
    "MEAN",
    "MEDIAN",
    "GAUSSIAN",
    "GEOMETRIC_MEAN",
    "MIN",
    "MAX",
    "CENTERED_OWA",
    "DEFAULT_PENALTY_CANDIDATES",
    "k_alpha",
    "penalty",
    "parse_method",
    "cowa_weights",
    "gaussian_weights",
    "reduce_plain",
    "reduce_array",
)

import enum
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .._datastructures import FloatArray
from ..types import DomainError, ShapeError


class AggregatorKind(enum.Enum):
    MEAN = "mean"
    MEDIAN = "median"
    GAUSSIAN = "gaussian"
    GEOMETRIC_MEAN = "geomean"
    K_ALPHA = "k"
    CENTERED_OWA = "cowa"
    MIN = "min"
    MAX = "max"
    PENALTY = "penalty"


@dataclass(frozen=True)
class AggregatorId:
    """
    Names a comparison reducer.

    ``alpha`` is only used by ``K_ALPHA`` and ``candidates`` only by ``PENALTY``.
    Use the module constants, :func:`k_alpha` and :func:`penalty` rather than
    building instances by hand.
    """

    kind: AggregatorKind
    alpha: Optional[float] = None
    candidates: Tuple["AggregatorId", ...] = ()

    def __post_init__(self) -> None:
        if self.kind is AggregatorKind.K_ALPHA:
            if self.alpha is None or not 0.0 <= self.alpha <= 1.0:
                raise DomainError(f"K_alpha needs alpha in [0, 1], got {self.alpha}")
        if self.kind is AggregatorKind.PENALTY:
            if len(self.candidates) == 0:
                raise ValueError("The penalty reducer needs at least one candidate")
            if any(c.kind is AggregatorKind.PENALTY for c in self.candidates):
                raise ValueError("Penalty candidates can't be penalty reducers")

    @property
    def name(self) -> str:
        """The method name used on the command line and in reports."""
        if self.kind is AggregatorKind.K_ALPHA:
            return f"k{self.alpha:g}"
        return self.kind.value

    def __str__(self) -> str:
        return self.name


MEAN = AggregatorId(AggregatorKind.MEAN)
MEDIAN = AggregatorId(AggregatorKind.MEDIAN)
GAUSSIAN = AggregatorId(AggregatorKind.GAUSSIAN)
GEOMETRIC_MEAN = AggregatorId(AggregatorKind.GEOMETRIC_MEAN)
MIN = AggregatorId(AggregatorKind.MIN)
MAX = AggregatorId(AggregatorKind.MAX)
CENTERED_OWA = AggregatorId(AggregatorKind.CENTERED_OWA)

DEFAULT_PENALTY_CANDIDATES: Tuple[AggregatorId, ...] = (
    GEOMETRIC_MEAN,
    MIN,
    MAX,
    MEAN,
    MEDIAN,
)


def k_alpha(alpha: float) -> AggregatorId:
    """The interpolating operator ``(1 - alpha) * min + alpha * max``."""
    return AggregatorId(AggregatorKind.K_ALPHA, alpha=float(alpha))


def penalty(
    candidates: Sequence[AggregatorId] = DEFAULT_PENALTY_CANDIDATES,
) -> AggregatorId:
    return AggregatorId(AggregatorKind.PENALTY, candidates=tuple(candidates))


_BY_NAME: Dict[str, AggregatorId] = {
    a.name: a
    for a in (MEAN, MEDIAN, GAUSSIAN, GEOMETRIC_MEAN, MIN, MAX, CENTERED_OWA)
}


def parse_method(name: str) -> AggregatorId:
    """
    Look up a reducer by its command line name: ``mean``, ``median``, ``gaussian``,
    ``geomean``, ``cowa``, ``min``, ``max``, ``penalty`` or ``k<alpha>`` (for example
    ``k0.25``).
    """
    key = name.strip().lower()
    if key in _BY_NAME:
        return _BY_NAME[key]
    if key == "penalty":
        return penalty()
    if key.startswith("k"):
        try:
            alpha = float(key[1:])
        except ValueError:
            pass
        else:
            return k_alpha(alpha)
    raise ValueError(f"Unknown reduction method: {name!r}")


def cowa_weights(m: int) -> FloatArray:
    """
    Centered OWA weights for ``m`` sorted inputs: the triangular profile
    ``min(i, m + 1 - i)``, normalized to sum to 1. For ``m = 4`` this is
    ``(1, 2, 2, 1) / 6``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    i = np.arange(1, m + 1, dtype=np.float64)
    w = np.minimum(i, m + 1 - i)
    return w / w.sum()


def gaussian_weights(r: int) -> FloatArray:
    """
    Row-major weights of an ``r x r`` gaussian kernel centered on the block, with
    ``sigma = r / 2``, normalized to sum to 1.
    """
    centre = (r - 1) / 2
    sigma = r / 2
    d = np.arange(r, dtype=np.float64) - centre
    g = np.exp(-(d[:, np.newaxis] ** 2 + d[np.newaxis, :] ** 2) / (2 * sigma**2))
    return (g / g.sum()).ravel()


def _grid_side(m: int) -> int:
    r = math.isqrt(m)
    if r * r != m:
        raise ShapeError(f"The gaussian reducer needs a square block, got {m} values")
    return r


def reduce_array(values: npt.ArrayLike, agg: AggregatorId) -> FloatArray:
    """
    Apply a plain reducer along the last axis of ``values``.

    Values are taken in block row-major order; the gaussian reducer needs the last
    axis to hold ``r * r`` entries. The result is clipped to ``[min, max]`` of each
    row, so every reducer is internal.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim == 0 or x.shape[-1] == 0:
        raise DomainError("At least one value is required")
    if not np.isfinite(x).all():
        raise DomainError("Values must be finite")
    kind = agg.kind
    m = x.shape[-1]

    if kind is AggregatorKind.MEAN:
        y = np.mean(x, axis=-1)
    elif kind is AggregatorKind.MEDIAN:
        y = np.sort(x, axis=-1)[..., (m - 1) // 2]
    elif kind is AggregatorKind.GEOMETRIC_MEAN:
        if np.any(x < 0):
            raise DomainError("The geometric mean is undefined for negative values")
        with np.errstate(divide="ignore"):
            y = np.exp(np.mean(np.log(x), axis=-1))
    elif kind is AggregatorKind.GAUSSIAN:
        y = x @ gaussian_weights(_grid_side(m))
    elif kind is AggregatorKind.K_ALPHA:
        assert agg.alpha is not None
        y = (1 - agg.alpha) * np.min(x, axis=-1) + agg.alpha * np.max(x, axis=-1)
    elif kind is AggregatorKind.CENTERED_OWA:
        y = np.sort(x, axis=-1) @ cowa_weights(m)
    elif kind is AggregatorKind.MIN:
        y = np.min(x, axis=-1)
    elif kind is AggregatorKind.MAX:
        y = np.max(x, axis=-1)
    else:
        raise ValueError(f"{agg} is not a plain reducer; use penalty_reduce")

    return np.clip(y, np.min(x, axis=-1), np.max(x, axis=-1))


def reduce_plain(values: npt.ArrayLike, agg: AggregatorId) -> float:
    """
    Reduce a sequence of values with a plain reducer.

    Parameters
    ----------
    values
        Non-empty sequence of finite values. For the gaussian reducer these are the
        ``r * r`` entries of a block channel in row-major order.
    agg
        Which reducer to apply; anything but ``PENALTY``.

    Raises
    ------
    DomainError
        For empty or non-finite input, and for the geometric mean of negative values.
    """
    return float(reduce_array(np.ravel(np.asarray(values, dtype=np.float64)), agg))
