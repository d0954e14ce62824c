"""Moderate deviation functions and the means they induce."""

from ._functions import (
    DeviationKind,
    DeviationSpec,
    MonotoneMap,
    basic_deviation,
    epsilon_deviation,
    eval_deviation,
    identity,
    linear_deviation,
    odd_power,
    scaled,
    signed_power,
)
from ._means import (
    SolverConfig,
    d_mean_bisect,
    d_mean_epsilon_closed,
    deviation_mean,
    two_point_epsilon,
)

__all__ = (
    # _functions.py
    "DeviationKind",
    "DeviationSpec",
    "MonotoneMap",
    "basic_deviation",
    "epsilon_deviation",
    "eval_deviation",
    "identity",
    "linear_deviation",
    "odd_power",
    "scaled",
    "signed_power",
    # _means.py
    "SolverConfig",
    "d_mean_bisect",
    "d_mean_epsilon_closed",
    "deviation_mean",
    "two_point_epsilon",
)
