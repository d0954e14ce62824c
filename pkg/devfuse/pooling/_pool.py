"""MD and LMD pooling over disjoint windows of an ``(H, W, C)`` tensor."""

__all__ = (
    "PoolMode",
    "PoolParams",
    "md_pool_forward",
    "md_pool_backward",
    "average_pool",
)

import math
from dataclasses import dataclass
from typing import Literal, Optional, Tuple

import numpy as np
import numpy.typing as npt

from .._datastructures import FloatArray, Tensor3
from .._docstring import doc_format
from ..deviation._functions import check_epsilon
from ..deviation._means import epsilon_kernel
from ..fusion._blocks import block_values, unblock_values
from ..types import DomainError, FusionError, InvalidWeightsError, ShapeError

PoolMode = Literal["md", "lmd"]


@doc_format()
@dataclass(frozen=True)
class PoolParams:
    """
    Hyperparameters of an MD/LMD pooling layer.

    Parameters
    ----------
    r
        Window side; windows are disjoint (stride ``r``).
    epsilon
        {epsilon} Not trained.
    weights
        One positive weight per channel, applied by scaling the inputs. ``None``
        means all ones. ``md`` mode requires all ones.
    mode
        ``md`` for plain pooling or ``lmd`` for learnable channel weights.
    """

    r: int = 2
    epsilon: float = 1.0
    weights: Optional[Tuple[float, ...]] = None
    mode: PoolMode = "md"

    def __post_init__(self) -> None:
        if self.r < 2:
            raise ShapeError(f"The pooling window must be at least 2, got {self.r}")
        check_epsilon(self.epsilon)
        if self.mode not in ("md", "lmd"):
            raise ValueError(f"Unknown pooling mode: {self.mode}")
        if self.weights is None:
            return
        w = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if not all(math.isfinite(x) and x > 0 for x in w):
            raise InvalidWeightsError("Pooling weights must be finite and positive")
        if self.mode == "md" and any(x != 1.0 for x in w):
            raise InvalidWeightsError("MD pooling uses unit weights; use mode='lmd'")

    def channel_weights(self, channels: int) -> FloatArray:
        if self.weights is None:
            return np.ones(channels)
        if len(self.weights) != channels:
            raise InvalidWeightsError(
                f"Expected {channels} pooling weights, got {len(self.weights)}"
            )
        return np.asarray(self.weights, dtype=np.float64)


def _as_tensor(t: npt.ArrayLike) -> Tensor3:
    arr = np.asarray(t, dtype=np.float64)
    if arr.ndim != 3:
        raise ShapeError(f"Expected an (H, W, C) tensor, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise DomainError("Tensor entries must be finite")
    return arr


def _windows(t: Tensor3, p: PoolParams) -> Tuple[FloatArray, FloatArray]:
    # (H/r, W/r, C, r*r) window values and the channel weights broadcast onto them.
    blocks = block_values(t, p.r)
    w = p.channel_weights(t.shape[2])
    return blocks, w[np.newaxis, np.newaxis, :, np.newaxis]


def md_pool_forward(t: npt.ArrayLike, p: PoolParams) -> Tensor3:
    """
    Pool each ``r x r`` window of each channel to
    ``sum(u * (u + epsilon)) / (r*r*epsilon + sum(u))`` with ``u = w_c * b``.

    With unit weights the result is bit-identical to
    :func:`~devfuse.fusion.fuse` with an epsilon deviation.

    Raises
    ------
    ShapeError
        If ``r`` doesn't divide ``H`` and ``W``.
    DomainError
        If some ``u + epsilon`` is negative.
    DegenerateInputError
        If a window's denominator is zero (only possible for negative inputs).
    """
    blocks, w = _windows(_as_tensor(t), p)
    u = w * blocks
    try:
        return epsilon_kernel(u, np.ones_like(u), p.epsilon)
    except FusionError as e:
        a, b, c = e.location or (0, 0, 0)
        e.location = (a + 1, b + 1, c + 1)
        raise


def md_pool_backward(
    t: npt.ArrayLike, p: PoolParams, grad_out: npt.ArrayLike
) -> Tuple[Tensor3, FloatArray]:
    """
    Gradients of a scalar loss with respect to the pooling inputs and the channel
    weights, given the loss gradient ``grad_out`` with respect to the outputs.

    With ``N = sum(u (u + epsilon))`` and ``D = r*r*epsilon + sum(u)`` per window,
    ``dy/du_ij = ((2 u_ij + epsilon) D - N) / D^2``. The input gradient is
    ``grad_out * w_c * dy/du_ij`` and the weight gradient of channel ``c`` sums
    ``grad_out * b_ij * dy/du_ij`` over all windows.

    Returns
    -------
    :
        ``(grad_in, grad_w)`` with shapes ``(H, W, C)`` and ``(C,)``.
    """
    x = _as_tensor(t)
    blocks, w = _windows(x, p)
    g = np.asarray(grad_out, dtype=np.float64)
    if g.shape != blocks.shape[:3]:
        raise ShapeError(
            f"grad_out has shape {g.shape}, expected {tuple(blocks.shape[:3])}"
        )

    u = w * blocks
    num = np.sum(u * (u + p.epsilon), axis=-1, keepdims=True)
    den = np.sum(u + p.epsilon, axis=-1, keepdims=True)
    dy_du = ((2 * u + p.epsilon) * den - num) / (den * den)
    upstream = g[..., np.newaxis] * dy_du

    grad_in = unblock_values(upstream * w, p.r)
    grad_w = np.sum(upstream * blocks, axis=(0, 1, 3))
    return grad_in, grad_w


def average_pool(t: npt.ArrayLike, r: int) -> Tensor3:
    """Plain average pooling over disjoint ``r x r`` windows."""
    return np.mean(block_values(_as_tensor(t), r), axis=-1)
