__all__ = ("PenaltyResult", "penalty_search", "penalty_reduce", "reduce_block")

import itertools
import math
import warnings
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .._datastructures import Block
from ..types import DomainError, PenaltyWarning
from ._plain import (
    DEFAULT_PENALTY_CANDIDATES,
    AggregatorId,
    AggregatorKind,
    reduce_array,
)


class PenaltyResult(NamedTuple):
    values: Tuple[float, ...]
    """The winning n-tuple."""
    penalty: float
    """Summed Euclidean distance from the block pixels to ``values``."""
    assignment: Tuple[int, ...]
    """Candidate index used for each channel."""
    evaluated: int
    """Number of assignments whose penalty was computed."""


def _channel_outputs(
    block: Block, candidates: Sequence[AggregatorId]
) -> List[List[Optional[float]]]:
    # outputs[c][k]: candidate c on channel k, None when the candidate failed.
    planes = block.data.transpose(2, 0, 1).reshape(block.channels, block.r * block.r)
    outputs: List[List[Optional[float]]] = []
    for agg in candidates:
        row: List[Optional[float]] = []
        for k in range(block.channels):
            try:
                row.append(float(reduce_array(planes[k], agg)))
            except DomainError as e:
                warnings.warn(
                    f"Penalty candidate {agg} failed on channel {k + 1} of block "
                    f"{block.origin} and was skipped: {e}",
                    PenaltyWarning,
                    stacklevel=4,
                )
                row.append(None)
        outputs.append(row)
    return outputs


def penalty_search(
    block: Block, candidates: Sequence[AggregatorId] = DEFAULT_PENALTY_CANDIDATES
) -> PenaltyResult:
    """
    Exhaustive search over every assignment of one candidate reducer per channel.

    All ``len(candidates) ** n`` ordered assignments are enumerated in lexicographic
    order of candidate indices. Each assignment gives an n-tuple ``y``, whose penalty
    is ``sum(||pixel - y||)`` over the block's pixels. The first assignment with the
    smallest penalty wins.

    Raises
    ------
    DomainError
        If no assignment can be evaluated because candidates failed.
    """
    if len(candidates) == 0:
        raise ValueError("At least one penalty candidate is required")
    if any(c.kind is AggregatorKind.PENALTY for c in candidates):
        raise ValueError("Penalty candidates can't be penalty reducers")

    outputs = _channel_outputs(block, candidates)
    pixels = [tuple(p) for p in block.pixels().tolist()]

    best: Optional[PenaltyResult] = None
    evaluated = 0
    for assignment in itertools.product(range(len(candidates)), repeat=block.channels):
        y = [outputs[c][k] for k, c in enumerate(assignment)]
        if None in y:
            continue
        evaluated += 1
        cost = math.fsum(math.dist(p, y) for p in pixels)  # type: ignore[arg-type]
        if best is None or cost < best.penalty:
            best = PenaltyResult(tuple(y), cost, assignment, 0)  # type: ignore[arg-type]

    if best is None:
        raise DomainError(
            f"Every penalty candidate failed on block {block.origin}",
            location=block.origin,
        )
    return best._replace(evaluated=evaluated)


def penalty_reduce(
    block: Block, candidates: Sequence[AggregatorId] = DEFAULT_PENALTY_CANDIDATES
) -> Tuple[float, ...]:
    """The n-tuple chosen by :func:`penalty_search`."""
    return penalty_search(block, candidates).values


def reduce_block(block: Block, agg: AggregatorId) -> Tuple[float, ...]:
    """Reduce each channel of ``block`` with ``agg``; penalty reducers search jointly."""
    if agg.kind is AggregatorKind.PENALTY:
        return penalty_reduce(block, agg.candidates)
    planes = block.data.transpose(2, 0, 1).reshape(block.channels, block.r * block.r)
    return tuple(float(v) for v in reduce_array(planes, agg))
