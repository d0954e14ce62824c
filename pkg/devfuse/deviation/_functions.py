"""Moderate deviation functions."""

__all__ = (
    "MonotoneMap",
    "DeviationKind",
    "DeviationSpec",
    "identity",
    "scaled",
    "odd_power",
    "signed_power",
    "epsilon_deviation",
    "linear_deviation",
    "basic_deviation",
    "eval_deviation",
)

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .._datastructures import FloatArray
from ..types import DomainError

ArrayOrFloat = Union[float, FloatArray]

# Monotonicity of user supplied maps is checked on this grid.
PROBE_POINTS: FloatArray = np.linspace(-10.0, 10.0, 1001)


@dataclass(frozen=True)
class MonotoneMap:
    """
    A named real function used to build a basic moderate deviation function.

    ``fn`` must accept numpy arrays and apply element-wise.
    """

    name: str
    fn: Callable[[FloatArray], FloatArray]

    def __call__(self, t: ArrayOrFloat) -> FloatArray:
        return self.fn(np.asarray(t, dtype=np.float64))

    @classmethod
    def from_callable(
        cls, name: str, fn: Callable[[float], float], vectorized: bool = False
    ) -> "MonotoneMap":
        """
        Wrap a user function. Scalar-only functions are vectorized with
        :func:`numpy.vectorize`.
        """
        if vectorized:
            return cls(name, fn)  # type: ignore[arg-type]
        return cls(name, np.vectorize(fn, otypes=[np.float64]))

    def __str__(self) -> str:
        return self.name


def identity() -> MonotoneMap:
    return MonotoneMap("identity", lambda t: t)


def scaled(c: float) -> MonotoneMap:
    if not (math.isfinite(c) and c > 0):
        raise DomainError(f"The scale of a monotone map must be positive, got {c}")
    return MonotoneMap(f"scaled({c:g})", lambda t: c * t)


def odd_power(k: int) -> MonotoneMap:
    if k < 1 or k % 2 == 0:
        raise DomainError(f"odd_power needs a positive odd exponent, got {k}")
    return MonotoneMap(f"odd_power({k})", lambda t: t**k)


def signed_power(p: float) -> MonotoneMap:
    if not (math.isfinite(p) and p > 0):
        raise DomainError(f"signed_power needs a positive exponent, got {p}")
    return MonotoneMap(f"signed_power({p:g})", lambda t: np.sign(t) * np.abs(t) ** p)


def _check_zero_preserving(f: MonotoneMap) -> None:
    values = f(PROBE_POINTS)
    if not np.isfinite(values).all():
        raise DomainError(f"Monotone map {f} is not finite on [-10, 10]")
    if np.any(np.diff(values) < 0):
        raise DomainError(f"Monotone map {f} is not non-decreasing")
    if float(f(np.zeros(1))[0]) != 0.0:
        raise DomainError(f"Monotone map {f} must vanish at 0")
    nonzero = PROBE_POINTS != 0.0
    if np.any(values[nonzero] == 0.0):
        raise DomainError(f"Monotone map {f} must vanish only at 0")


def _check_strictly_increasing(s: MonotoneMap) -> None:
    values = s(PROBE_POINTS)
    if not np.isfinite(values).all():
        raise DomainError(f"Monotone map {s} is not finite on [-10, 10]")
    if np.any(np.diff(values) <= 0):
        raise DomainError(f"Monotone map {s} is not strictly increasing")


class DeviationKind(enum.Enum):
    EPSILON = "epsilon"
    LINEAR = "linear"
    BASIC = "basic"


@dataclass(frozen=True)
class DeviationSpec:
    """
    A moderate deviation function ``D(x, y)``.

    Build instances with :func:`epsilon_deviation`, :func:`linear_deviation` or
    :func:`basic_deviation`. Calling a spec evaluates ``D`` element-wise without any
    input validation; use :func:`eval_deviation` for checked scalar evaluation.
    """

    kind: DeviationKind
    epsilon: Optional[float] = None
    f: Optional[MonotoneMap] = None
    s: Optional[MonotoneMap] = None

    def __post_init__(self) -> None:
        if self.kind is DeviationKind.EPSILON:
            check_epsilon(self.epsilon)
        elif self.kind is DeviationKind.BASIC:
            if self.f is None or self.s is None:
                raise DomainError("A basic deviation needs both f and s")
            _check_zero_preserving(self.f)
            _check_strictly_increasing(self.s)

    def __call__(self, x: ArrayOrFloat, y: ArrayOrFloat) -> FloatArray:
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if self.kind is DeviationKind.EPSILON:
            return (x + self.epsilon) * (y - x)
        if self.kind is DeviationKind.LINEAR:
            return y - x
        assert self.f is not None and self.s is not None
        return self.f(self.s(y) - self.s(x))

    def __str__(self) -> str:
        if self.kind is DeviationKind.EPSILON:
            return f"epsilon({self.epsilon:g})"
        if self.kind is DeviationKind.LINEAR:
            return "linear"
        return f"basic(f={self.f}, s={self.s})"


def check_epsilon(epsilon: Optional[float]) -> float:
    if epsilon is None or not math.isfinite(epsilon) or epsilon < 1:
        raise DomainError(f"epsilon must be finite and at least 1, got {epsilon}")
    return float(epsilon)


def epsilon_deviation(epsilon: float) -> DeviationSpec:
    """
    ``D(x, y) = (x + epsilon)(y - x)``, a moderate deviation where ``x + epsilon > 0``.
    """
    return DeviationSpec(DeviationKind.EPSILON, epsilon=float(epsilon))


def linear_deviation() -> DeviationSpec:
    """``D(x, y) = y - x``; its D-mean is the (weighted) arithmetic mean."""
    return DeviationSpec(DeviationKind.LINEAR)


def basic_deviation(
    f: Optional[MonotoneMap] = None, s: Optional[MonotoneMap] = None
) -> DeviationSpec:
    """
    ``D(x, y) = f(s(y) - s(x))`` with ``f`` non-decreasing and zero only at 0, and
    ``s`` strictly increasing. Both default to the identity.
    """
    return DeviationSpec(
        DeviationKind.BASIC,
        f=f if f is not None else identity(),
        s=s if s is not None else identity(),
    )


def eval_deviation(spec: DeviationSpec, x: float, y: float) -> float:
    """
    Evaluate ``D(x, y)``.

    Raises
    ------
    DomainError
        If ``x`` or ``y`` is not finite.
    """
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DomainError(f"Deviation arguments must be finite, got ({x}, {y})")
    return float(spec(x, y))
