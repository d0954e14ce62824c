__all__ = ("WeightMode", "WeightSpec", "fuse")

import logging
from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from .._datastructures import FloatArray, FusedMatrix, MultiMatrix
from .._docstring import doc_format
from ..deviation import DeviationKind, DeviationSpec, SolverConfig, d_mean_bisect
from ..deviation._means import epsilon_kernel
from ..types import FusionError, InvalidWeightsError, ShapeError
from ._blocks import block_values

logger = logging.getLogger(__name__)

WeightMode = Literal["deviation-weighted", "input-scaled"]


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """
    How block entries are weighted when a matrix is fused.

    In ``deviation-weighted`` mode the weight multiplies each deviation term, so the
    fused value solves ``sum(w * D(b, y)) = 0``; a weight shared by the whole channel
    cancels out. In ``input-scaled`` mode the block entries are multiplied by their
    weights and the unweighted mean of the scaled block is taken.

    At most one of ``channel`` (one weight per channel) and ``per_entry`` (an
    ``(n, r, r)`` array of weighting matrices) may be given; neither means unit
    weights.
    """

    mode: WeightMode = "deviation-weighted"
    channel: Optional[Tuple[float, ...]] = None
    per_entry: Optional[FloatArray] = None

    def __post_init__(self) -> None:
        if self.mode not in ("deviation-weighted", "input-scaled"):
            raise ValueError(f"Unknown weighting mode: {self.mode}")
        if self.channel is not None and self.per_entry is not None:
            raise InvalidWeightsError(
                "Give channel weights or per-entry weights, not both"
            )
        if self.channel is not None:
            object.__setattr__(self, "channel", tuple(float(c) for c in self.channel))
        if self.per_entry is not None:
            arr = np.array(self.per_entry, dtype=np.float64)
            if arr.ndim == 2:
                arr = arr[np.newaxis]
            if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
                raise InvalidWeightsError(
                    f"Per-entry weights must have shape (n, r, r), got {arr.shape}"
                )
            object.__setattr__(self, "per_entry", arr)
        for w in self._arrays():
            if not np.isfinite(w).all() or np.any(w < 0):
                raise InvalidWeightsError("Weights must be finite and non-negative")

    def _arrays(self) -> Sequence[FloatArray]:
        if self.channel is not None:
            return [np.asarray(self.channel, dtype=np.float64)]
        if self.per_entry is not None:
            return [self.per_entry]
        return []

    @classmethod
    def unit(cls, mode: WeightMode = "deviation-weighted") -> "WeightSpec":
        return cls(mode)

    @classmethod
    def channel_vector(
        cls, w: npt.ArrayLike, mode: WeightMode = "deviation-weighted"
    ) -> "WeightSpec":
        return cls(mode, channel=tuple(np.ravel(np.asarray(w, dtype=np.float64))))

    @classmethod
    def per_entry_matrices(
        cls, w: npt.ArrayLike, mode: WeightMode = "deviation-weighted"
    ) -> "WeightSpec":
        return cls(mode, per_entry=np.asarray(w, dtype=np.float64))

    def resolve(self, n: int, r: int) -> FloatArray:
        """
        The weights as an ``(n, r*r)`` array; row ``k`` weights the entries of
        channel ``k`` of a block in row-major order.
        """
        if self.channel is not None:
            if len(self.channel) != n:
                raise InvalidWeightsError(
                    f"Expected {n} channel weights, got {len(self.channel)}"
                )
            w = np.repeat(np.asarray(self.channel)[:, np.newaxis], r * r, axis=1)
        elif self.per_entry is not None:
            k, s, t = self.per_entry.shape
            if (s, t) != (r, r) or k not in (1, n):
                raise InvalidWeightsError(
                    f"Per-entry weights of shape {self.per_entry.shape} don't fit "
                    f"{n} channels of {r}x{r} blocks"
                )
            w = np.broadcast_to(self.per_entry.reshape(k, r * r), (n, r * r)).copy()
        else:
            w = np.ones((n, r * r))

        if self.mode == "deviation-weighted":
            empty = np.flatnonzero(w.sum(axis=1) == 0)
            if empty.size:
                raise InvalidWeightsError(
                    f"The weights of channel {int(empty[0]) + 1} are all zero"
                )
        return w


def _specs_per_channel(
    spec: Union[DeviationSpec, Sequence[DeviationSpec]], n: int
) -> Sequence[DeviationSpec]:
    if isinstance(spec, DeviationSpec):
        return [spec] * n
    specs = list(spec)
    if len(specs) != n:
        raise ShapeError(f"Expected {n} deviation functions, got {len(specs)}")
    return specs


def _annotate(e: FusionError, alpha: int, beta: int, k: int) -> FusionError:
    e.location = (alpha, beta, k)
    return e


@doc_format()
def fuse(
    m: MultiMatrix,
    r: int,
    spec: Union[DeviationSpec, Sequence[DeviationSpec]],
    weights: Optional[WeightSpec] = None,
    cfg: SolverConfig = SolverConfig(),
) -> FusedMatrix:
    """
    Fuse every ``r x r`` block of ``m`` into a single n-tuple.

    Entry ``(alpha, beta, k)`` of the result is the weighted deviation-based mean of
    channel ``k`` of block ``(alpha, beta)``. Epsilon deviations use the closed form,
    evaluated for all blocks of a channel at once; any other deviation is solved
    block by block with bisection.

    Parameters
    ----------
    m
        The matrix to fuse. ``r`` must divide both of its dimensions; use
        :func:`~devfuse.fusion.pad` first otherwise.
    r
        Block size, at least 2.
    spec
        One deviation function for all channels, or one per channel.
    weights
        A :class:`WeightSpec`; ``None`` means unit weights in deviation-weighted mode.
    cfg
        {cfg}

    Returns
    -------
    :
        A ``(p/r) x (q/r) x n`` :class:`~devfuse.FusedMatrix`.

    Raises
    ------
    ShapeError
        If ``r`` doesn't divide the dimensions of ``m``.
    FusionError
        Errors from the solvers, with ``location`` set to the 1-based
        ``(alpha, beta, k)`` of the block channel that failed.
    """
    weights = weights if weights is not None else WeightSpec()
    blocks = block_values(m.data, r)
    n_alpha, n_beta, n, _ = blocks.shape
    specs = _specs_per_channel(spec, n)
    w = weights.resolve(n, r)
    scaled = weights.mode == "input-scaled"

    out = np.empty((n_alpha, n_beta, n))
    for k in range(n):
        x = blocks[:, :, k, :]
        wk = np.broadcast_to(w[k], x.shape)
        if scaled:
            x = wk * x
            wk = np.ones_like(x)

        if specs[k].kind is DeviationKind.EPSILON:
            assert specs[k].epsilon is not None
            try:
                out[:, :, k] = epsilon_kernel(x, wk, specs[k].epsilon)
            except FusionError as e:
                a, b = (e.location or (0, 0))[:2]
                raise _annotate(e, a + 1, b + 1, k + 1)
            continue

        logger.debug(
            "Fusing channel %d of %d blocks by bisection with %s",
            k + 1,
            n_alpha * n_beta,
            specs[k],
        )
        for a in range(n_alpha):
            for b in range(n_beta):
                try:
                    out[a, b, k] = d_mean_bisect(specs[k], x[a, b], wk[a, b], cfg)
                except FusionError as e:
                    raise _annotate(e, a + 1, b + 1, k + 1)

    return FusedMatrix(out, block_size=r)
