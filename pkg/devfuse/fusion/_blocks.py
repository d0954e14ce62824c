"""Channel planes, block tiling and padding of matrices of n-tuples."""

__all__ = (
    "PadMode",
    "split_channels",
    "stack_channels",
    "extract_block",
    "iter_blocks",
    "block_interval",
    "pad",
    "crop",
    "block_values",
    "unblock_values",
)

from typing import Iterator, List, Literal, Sequence

import numpy as np

from .._datastructures import Block, FloatArray, Interval, MultiMatrix
from ..types import BlockIndexError, ShapeError

PadMode = Literal["edge", "zero", "reflect"]

_NUMPY_PAD_MODES = {"edge": "edge", "zero": "constant", "reflect": "symmetric"}


def split_channels(m: MultiMatrix) -> List[FloatArray]:
    """The ``n`` channel planes of ``m``, each a ``p x q`` array."""
    return [m.data[:, :, k].copy() for k in range(m.channels)]


def stack_channels(planes: Sequence[FloatArray]) -> MultiMatrix:
    """Inverse of :func:`split_channels`."""
    if len(planes) == 0:
        raise ShapeError("At least one channel plane is required")
    shapes = {np.shape(plane) for plane in planes}
    if len(shapes) != 1:
        raise ShapeError(f"Channel planes have different shapes: {sorted(shapes)}")
    return MultiMatrix(np.stack([np.asarray(p, dtype=np.float64) for p in planes], -1))


def check_block_size(r: int) -> None:
    if r < 2:
        raise ShapeError(f"The block size r must be at least 2, got {r}")


def check_divisible(rows: int, cols: int, r: int) -> None:
    check_block_size(r)
    if rows % r or cols % r:
        raise ShapeError(
            f"r = {r} must divide both dimensions of a {rows}x{cols} matrix; "
            "pad the matrix first"
        )


def extract_block(m: MultiMatrix, alpha: int, beta: int, r: int) -> Block:
    """
    The block ``B^{alpha beta}``: rows ``(alpha-1)r+1 .. alpha r`` and columns
    ``(beta-1)r+1 .. beta r`` of ``m``. ``alpha`` and ``beta`` are 1-based.
    """
    check_divisible(m.rows, m.cols, r)
    n_alpha, n_beta = m.rows // r, m.cols // r
    if not (1 <= alpha <= n_alpha and 1 <= beta <= n_beta):
        raise BlockIndexError(
            f"Block ({alpha}, {beta}) is outside the {n_alpha}x{n_beta} tiling"
        )
    i0, j0 = (alpha - 1) * r, (beta - 1) * r
    return Block(m.data[i0 : i0 + r, j0 : j0 + r, :], origin=(alpha, beta))


def iter_blocks(m: MultiMatrix, r: int) -> Iterator[Block]:
    """All blocks of the tiling, in row-major ``(alpha, beta)`` order."""
    check_divisible(m.rows, m.cols, r)
    for alpha in range(1, m.rows // r + 1):
        for beta in range(1, m.cols // r + 1):
            yield extract_block(m, alpha, beta, r)


def block_interval(b: Block, k: int) -> Interval:
    """The interval ``[min, max]`` spanned by channel ``k`` (1-based) of ``b``."""
    if not 1 <= k <= b.channels:
        raise BlockIndexError(f"Channel {k} is outside 1..{b.channels}")
    plane = b.data[:, :, k - 1]
    return Interval(float(plane.min()), float(plane.max()))


def pad(m: MultiMatrix, r: int, mode: PadMode = "edge") -> MultiMatrix:
    """
    Grow ``m`` at the bottom and right to the least multiples of ``r``.

    ``edge`` replicates the nearest edge value, ``zero`` fills with zeros and
    ``reflect`` mirrors the matrix across its border. A matrix whose dimensions
    are already multiples of ``r`` is returned unchanged.
    """
    check_block_size(r)
    if mode not in _NUMPY_PAD_MODES:
        raise ValueError(f"Unknown pad mode: {mode}")
    extra_rows = -m.rows % r
    extra_cols = -m.cols % r
    if extra_rows == 0 and extra_cols == 0:
        return m
    data = np.pad(
        m.data,
        ((0, extra_rows), (0, extra_cols), (0, 0)),
        mode=_NUMPY_PAD_MODES[mode],  # type: ignore[call-overload]
    )
    return MultiMatrix(data)


def crop(m: MultiMatrix, rows: int, cols: int) -> MultiMatrix:
    """The top-left ``rows x cols`` part of ``m``."""
    if not (1 <= rows <= m.rows and 1 <= cols <= m.cols):
        raise ShapeError(f"Can't crop a {m.rows}x{m.cols} matrix to {rows}x{cols}")
    if rows == m.rows and cols == m.cols:
        return m
    return MultiMatrix(m.data[:rows, :cols, :])


def block_values(data: FloatArray, r: int) -> FloatArray:
    """
    Rearrange a ``(p, q, n)`` array into ``(p/r, q/r, n, r*r)``: the last axis holds
    the entries of one block channel in row-major order.
    """
    p, q, n = data.shape
    check_divisible(p, q, r)
    tiles = data.reshape(p // r, r, q // r, r, n).transpose(0, 2, 4, 1, 3)
    return np.ascontiguousarray(tiles).reshape(p // r, q // r, n, r * r)


def unblock_values(blocks: FloatArray, r: int) -> FloatArray:
    """Inverse of :func:`block_values`."""
    n_alpha, n_beta, n, _ = blocks.shape
    tiles = blocks.reshape(n_alpha, n_beta, n, r, r).transpose(0, 3, 1, 4, 2)
    return np.ascontiguousarray(tiles).reshape(n_alpha * r, n_beta * r, n)
