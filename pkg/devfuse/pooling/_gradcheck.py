__all__ = (
    "GradCheckReport",
    "analytic_jacobians",
    "gradient_check",
    "numeric_gradients",
    "numeric_jacobians",
    "relative_error",
)

import logging
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from .._datastructures import FloatArray
from .._utils import make_rng
from ._pool import PoolParams, md_pool_backward, md_pool_forward

logger = logging.getLogger(__name__)

# Entries where both gradients are below this are compared absolutely.
MAGNITUDE_FLOOR = 1e-8


class GradCheckReport(NamedTuple):
    trials: int
    max_input_error: float
    max_weight_error: float
    tolerance: float

    @property
    def max_error(self) -> float:
        return max(self.max_input_error, self.max_weight_error)

    @property
    def passed(self) -> bool:
        return self.max_error < self.tolerance


def relative_error(analytic: FloatArray, numeric: FloatArray) -> float:
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), MAGNITUDE_FLOOR)
    return float(np.max(np.abs(analytic - numeric) / scale))


def _with_weights(p: PoolParams, weights: FloatArray) -> PoolParams:
    return PoolParams(p.r, p.epsilon, tuple(float(x) for x in weights), "lmd")


def numeric_jacobians(
    t: FloatArray, p: PoolParams, h: float = 1e-6
) -> Tuple[FloatArray, FloatArray]:
    """
    Central finite differences of every pooled output with respect to every input
    and every channel weight.

    Returns
    -------
    :
        ``(d_in, d_w)`` with shapes ``out.shape + t.shape`` and ``out.shape + (C,)``.
        Outputs outside the perturbed window (or channel) difference to exactly 0.
    """
    out_shape = md_pool_forward(t, p).shape
    d_in = np.zeros(out_shape + t.shape)
    for idx in np.ndindex(*t.shape):
        plus, minus = t.copy(), t.copy()
        plus[idx] += h
        minus[idx] -= h
        diff = md_pool_forward(plus, p) - md_pool_forward(minus, p)
        d_in[(Ellipsis,) + idx] = diff / (2 * h)

    weights = p.channel_weights(t.shape[2])
    d_w = np.zeros(out_shape + weights.shape)
    for c in range(weights.size):
        plus, minus = weights.copy(), weights.copy()
        plus[c] += h
        minus[c] -= h
        diff = md_pool_forward(t, _with_weights(p, plus)) - md_pool_forward(
            t, _with_weights(p, minus)
        )
        d_w[..., c] = diff / (2 * h)
    return d_in, d_w


def analytic_jacobians(t: FloatArray, p: PoolParams) -> Tuple[FloatArray, FloatArray]:
    """The Jacobians of :func:`numeric_jacobians`, one backward pass per output."""
    out_shape = md_pool_forward(t, p).shape
    channels = t.shape[2]
    d_in = np.zeros(out_shape + t.shape)
    d_w = np.zeros(out_shape + (channels,))
    for o in np.ndindex(*out_shape):
        one_hot = np.zeros(out_shape)
        one_hot[o] = 1.0
        d_in[o], d_w[o] = md_pool_backward(t, p, one_hot)
    return d_in, d_w


def numeric_gradients(
    t: FloatArray, p: PoolParams, grad_out: FloatArray, h: float = 1e-6
) -> Tuple[FloatArray, FloatArray]:
    """Central finite differences of ``sum(grad_out * forward)``."""
    d_in, d_w = numeric_jacobians(t, p, h)
    g = np.asarray(grad_out, dtype=np.float64)
    return np.tensordot(g, d_in, axes=g.ndim), np.tensordot(g, d_w, axes=g.ndim)


def gradient_check(
    trials: int = 1000,
    r_list: Sequence[int] = (2, 3),
    eps_list: Sequence[float] = (1.0, 2.0, 32.0),
    seed: int = 0,
    h: float = 1e-6,
    weight_range: Tuple[float, float] = (0.5, 2.0),
    tolerance: float = 1e-6,
) -> GradCheckReport:
    """
    Compare :func:`md_pool_backward` with central finite differences on random
    inputs.

    Each trial draws ``r`` and ``epsilon`` from the given lists, an ``(r, 2r, 2)``
    tensor with entries in ``[0, 1]`` (two windows, two channels) and channel
    weights in ``weight_range``. Every entry of the input and weight Jacobians is
    compared by relative error; entries that are structurally zero difference to
    exactly 0 on both sides.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    rng = make_rng(seed)
    max_in = max_w = 0.0
    for _ in range(trials):
        r = int(rng.choice(r_list))
        eps = float(rng.choice(eps_list))
        t = rng.uniform(0.0, 1.0, size=(r, 2 * r, 2))
        w = rng.uniform(*weight_range, size=2)
        p = _with_weights(PoolParams(r, eps), w)

        analytic_in, analytic_w = analytic_jacobians(t, p)
        numeric_in, numeric_w = numeric_jacobians(t, p, h)
        max_in = max(max_in, relative_error(analytic_in, numeric_in))
        max_w = max(max_w, relative_error(analytic_w, numeric_w))

    report = GradCheckReport(trials, max_in, max_w, tolerance)
    logger.info(
        "Gradient check over %d trials: input %.3g, weights %.3g",
        trials,
        max_in,
        max_w,
    )
    return report
