"""Deviation-based means: the generic bisection construction and the closed forms."""

__all__ = (
    "SolverConfig",
    "d_mean_bisect",
    "d_mean_epsilon_closed",
    "epsilon_kernel",
    "two_point_epsilon",
    "deviation_mean",
)

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from .._datastructures import FloatArray
from .._docstring import doc_format
from ..types import (
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    InvalidWeightsError,
)
from ._functions import DeviationKind, DeviationSpec, check_epsilon

Values = Union[Sequence[float], npt.ArrayLike]


@dataclass(frozen=True)
class SolverConfig:
    """
    Settings for the bisection behind :func:`d_mean_bisect`.

    Parameters
    ----------
    tolerance
        Absolute tolerance on the output; each bound is refined until its bracket is
        narrower than this.
    max_iterations
        Iteration budget for each of the two bounds.
    """

    tolerance: float = 1e-9
    max_iterations: int = 200

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tolerance) and self.tolerance > 0):
            raise DomainError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise DomainError(
                f"max_iterations must be at least 1, got {self.max_iterations}"
            )

    def required_iterations(self, width: float) -> int:
        """Iterations needed to shrink a bracket of ``width`` below the tolerance."""
        if width <= self.tolerance:
            return 0
        return math.ceil(math.log2(width / self.tolerance))


def _values_and_weights(
    values: Values, weights: Optional[Values]
) -> Tuple[FloatArray, FloatArray]:
    x = np.asarray(values, dtype=np.float64)
    if x.ndim == 0 or x.shape[-1] == 0:
        raise DomainError("At least one value is required")
    if not np.isfinite(x).all():
        raise DomainError("Values must be finite")

    if weights is None:
        w = np.ones_like(x)
    else:
        try:
            w = np.broadcast_to(np.asarray(weights, dtype=np.float64), x.shape)
        except ValueError:
            raise InvalidWeightsError(
                f"Weights of shape {np.shape(weights)} don't match values of shape "
                f"{x.shape}"
            ) from None
    if not np.isfinite(w).all() or np.any(w < 0):
        raise InvalidWeightsError("Weights must be finite and non-negative")
    if np.any(np.sum(w, axis=-1) == 0):
        raise InvalidWeightsError("Weights must not be all zero")
    return x, w


def _first_row(mask: "npt.NDArray[np.bool_]") -> Tuple[int, ...]:
    return tuple(int(i) for i in np.unravel_index(np.argmax(mask), mask.shape))


def epsilon_kernel(x: FloatArray, w: FloatArray, epsilon: float) -> FloatArray:
    """
    Root of ``sum(w * (x + epsilon) * (y - x)) = 0`` along the last axis.

    Only the closed form's domain is checked: every positively weighted value needs
    ``x + epsilon >= 0``, which makes the root a convex combination of the values.
    The summation order is fixed by sorting each row by value (then weight), so
    permuting (value, weight) pairs gives bit-identical results. The result is
    clipped to the row's ``[min, max]``, which only absorbs rounding and makes
    constant rows come back exactly.
    """
    order = np.lexsort((w, x), axis=-1)
    xs = np.take_along_axis(x, order, axis=-1)
    ws = np.take_along_axis(w, order, axis=-1)
    shifted = xs + epsilon
    outside = np.any((ws > 0) & (shifted < 0), axis=-1)
    if np.any(outside):
        raise DomainError(
            "x + epsilon must be non-negative for every weighted value",
            location=_first_row(outside),
        )
    num = np.sum(ws * xs * shifted, axis=-1)
    den = np.sum(ws * shifted, axis=-1)
    zero = den == 0
    if np.any(zero):
        raise DegenerateInputError(
            "sum(w * (x + epsilon)) is zero; the closed form is undefined",
            location=_first_row(zero),
        )
    return np.clip(num / den, xs[..., 0], xs[..., -1])


@doc_format()
def d_mean_epsilon_closed(
    values: Values, weights: Optional[Values] = None, epsilon: float = 1.0
) -> Union[float, FloatArray]:
    """
    Weighted D-mean for ``D(x, y) = (x + epsilon)(y - x)``, in closed form:
    ``sum(w * x * (x + epsilon)) / sum(w * (x + epsilon))``.

    Parameters
    ----------
    values
        The values to aggregate. Arrays of shape ``(..., m)`` are reduced along the
        last axis.
    weights
        {weights}
    epsilon
        {epsilon}

    Returns
    -------
    :
        A float for one-dimensional input, otherwise an array of shape ``(...)``.

    Raises
    ------
    DomainError
        If a positively weighted value has ``x + epsilon < 0``.
    DegenerateInputError
        If ``sum(w * (x + epsilon))`` is zero.
    """
    eps = check_epsilon(epsilon)
    x, w = _values_and_weights(values, weights)
    y = epsilon_kernel(x, w, eps)
    if y.ndim == 0:
        return float(y)
    return y


def two_point_epsilon(u: float, v: float, epsilon: float = 1.0) -> float:
    """
    The two-argument mean ``(u(u + epsilon) + v(v + epsilon)) / (u + v + 2 epsilon)``.
    """
    eps = check_epsilon(epsilon)
    if u + eps < 0 or v + eps < 0:
        raise DomainError("u + epsilon and v + epsilon must be non-negative")
    den = u + v + 2 * eps
    if den == 0:
        raise DegenerateInputError("u + v + 2 * epsilon is zero")
    return (u * (u + eps) + v * (v + eps)) / den


def _shrink(
    on_left: Callable[[float], bool],
    lo: float,
    hi: float,
    cfg: SolverConfig,
) -> float:
    # Invariant: on_left(lo) and not on_left(hi).
    for _ in range(cfg.max_iterations):
        if hi - lo < cfg.tolerance:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # Bracket can't shrink any further in floating point.
            break
        if on_left(mid):
            lo = mid
        else:
            hi = mid
    if hi - lo < cfg.tolerance:
        return 0.5 * (lo + hi)
    raise ConvergenceError(
        f"Bisection did not reach tolerance {cfg.tolerance:g} within "
        f"{cfg.max_iterations} iterations",
        bracket=(lo, hi),
    )


def _sup_negative(
    total: Callable[[float], float], lo: float, hi: float, cfg: SolverConfig
) -> float:
    # sup {y in [lo, hi] : total(y) < 0}; an empty set gives lo.
    if total(lo) >= 0:
        return lo
    if total(hi) < 0:
        return hi
    return _shrink(lambda y: total(y) < 0, lo, hi, cfg)


def _inf_positive(
    total: Callable[[float], float], lo: float, hi: float, cfg: SolverConfig
) -> float:
    # inf {y in [lo, hi] : total(y) > 0}; an empty set gives hi.
    if total(hi) <= 0:
        return hi
    if total(lo) > 0:
        return lo
    return _shrink(lambda y: total(y) <= 0, lo, hi, cfg)


@doc_format()
def d_mean_bisect(
    spec: DeviationSpec,
    values: Values,
    weights: Optional[Values] = None,
    cfg: SolverConfig = SolverConfig(),
) -> float:
    """
    Weighted deviation-based mean of ``values`` for any moderate deviation ``spec``.

    The result is the midpoint of ``sup{{y : F(y) < 0}}`` and ``inf{{y : F(y) > 0}}``
    over ``[min(values), max(values)]``, with ``F(y) = sum(w * D(x, y))``. Both bounds
    are located by bisection, which is valid because ``F`` is non-decreasing in
    ``y``. When ``F`` vanishes on a whole interval, the midpoint of that interval is
    returned.

    Parameters
    ----------
    spec
        The deviation function.
    values
        One-dimensional sequence of finite values.
    weights
        {weights}
    cfg
        {cfg}

    Raises
    ------
    InvalidWeightsError
        If the weights are negative, of the wrong length, or all zero.
    ConvergenceError
        If a bound isn't located within the iteration budget.
    """
    x, w = _values_and_weights(np.ravel(np.asarray(values, dtype=np.float64)), weights)
    order = np.lexsort((w, x))
    x, w = x[order], w[order]
    lo, hi = float(x[0]), float(x[-1])
    if lo == hi:
        return lo

    def total(y: float) -> float:
        return float(np.sum(w * spec(x, y)))

    sup = _sup_negative(total, lo, hi, cfg)
    inf = _inf_positive(total, lo, hi, cfg)
    return min(max(0.5 * (sup + inf), lo), hi)


def deviation_mean(
    spec: DeviationSpec,
    values: Values,
    weights: Optional[Values] = None,
    cfg: SolverConfig = SolverConfig(),
) -> float:
    """
    Weighted D-mean of a one-dimensional sequence, using the closed form when
    ``spec`` is an epsilon deviation and bisection otherwise.
    """
    if spec.kind is DeviationKind.EPSILON:
        assert spec.epsilon is not None
        flat = np.ravel(np.asarray(values, dtype=np.float64))
        return float(d_mean_epsilon_closed(flat, weights, spec.epsilon))
    return d_mean_bisect(spec, values, weights, cfg)
