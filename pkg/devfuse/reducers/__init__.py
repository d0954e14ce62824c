"""Comparison reducers: classic means, order statistics and the penalty reducer."""

from ._penalty import PenaltyResult, penalty_reduce, penalty_search, reduce_block
from ._plain import (
    CENTERED_OWA,
    DEFAULT_PENALTY_CANDIDATES,
    GAUSSIAN,
    GEOMETRIC_MEAN,
    MAX,
    MEAN,
    MEDIAN,
    MIN,
    AggregatorId,
    AggregatorKind,
    cowa_weights,
    gaussian_weights,
    k_alpha,
    parse_method,
    penalty,
    reduce_array,
    reduce_plain,
)

__all__ = (
    # _plain.py
    "AggregatorId",
    "AggregatorKind",
    "CENTERED_OWA",
    "DEFAULT_PENALTY_CANDIDATES",
    "GAUSSIAN",
    "GEOMETRIC_MEAN",
    "MAX",
    "MEAN",
    "MEDIAN",
    "MIN",
    "cowa_weights",
    "gaussian_weights",
    "k_alpha",
    "parse_method",
    "penalty",
    "reduce_array",
    "reduce_plain",
    # _penalty.py
    "PenaltyResult",
    "penalty_reduce",
    "penalty_search",
    "reduce_block",
)
