"""Containers for matrices of real n-tuples and the blocks cut out of them."""

__all__ = ("FloatArray", "Tensor3", "Interval", "MultiMatrix", "Block", "FusedMatrix")

from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np
import numpy.typing as npt

from .types import DomainError, ShapeError

FloatArray = npt.NDArray[np.float64]

# An (H, W, C) activation tensor, as used by the pooling operators.
Tensor3 = FloatArray


class Interval(NamedTuple):
    """A closed real interval ``[lo, hi]``."""

    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol


def _as_tuple_array(data: object) -> FloatArray:
    arr = np.array(data, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, np.newaxis]
    if arr.ndim != 3:
        raise ShapeError(
            f"Expected a p x q (x n) array, got an array with {arr.ndim} dimensions"
        )
    if min(arr.shape) < 1:
        raise ShapeError(f"Every dimension must be at least 1, got {arr.shape}")
    if not np.isfinite(arr).all():
        raise DomainError("Matrix entries must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class MultiMatrix:
    """
    A ``p x q`` grid of real ``n``-tuples, stored as a ``(p, q, n)`` float array.

    A two dimensional array is accepted as a single-channel matrix. The array is
    copied on construction, so later changes to the source don't leak in.
    """

    data: FloatArray

    def __post_init__(self) -> None:
        object.__setattr__(self, "data", _as_tuple_array(self.data))

    @property
    def rows(self) -> int:
        return int(self.data.shape[0])

    @property
    def cols(self) -> int:
        return int(self.data.shape[1])

    @property
    def channels(self) -> int:
        return int(self.data.shape[2])

    @property
    def shape(self) -> Tuple[int, int, int]:
        return (self.rows, self.cols, self.channels)

    def plane(self, k: int) -> FloatArray:
        """The ``k``-th channel plane (0-based) as a ``p x q`` array."""
        return self.data[:, :, k]


@dataclass(frozen=True, eq=False)
class Block:
    """
    One ``r x r`` window of n-tuples cut from a :class:`MultiMatrix`.

    ``origin`` is the 1-based ``(alpha, beta)`` position of the block in the tiling.
    """

    data: FloatArray
    origin: Tuple[int, int] = (1, 1)

    def __post_init__(self) -> None:
        arr = _as_tuple_array(self.data)
        if arr.shape[0] != arr.shape[1]:
            raise ShapeError(f"Blocks must be square, got {arr.shape[0]}x{arr.shape[1]}")
        if arr.shape[0] < 2:
            raise ShapeError("Blocks must be at least 2x2")
        object.__setattr__(self, "data", arr)

    @property
    def r(self) -> int:
        return int(self.data.shape[0])

    @property
    def channels(self) -> int:
        return int(self.data.shape[2])

    def pixels(self) -> FloatArray:
        """The block's n-tuples in row-major order, as an ``(r*r, n)`` array."""
        return self.data.reshape(self.r * self.r, self.channels)


@dataclass(frozen=True, eq=False)
class FusedMatrix(MultiMatrix):
    """
    The ``(p/r) x (q/r)`` matrix of n-tuples produced by fusing every ``r x r`` block
    of a :class:`MultiMatrix`.
    """

    block_size: int = 2
