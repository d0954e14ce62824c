__all__ = ("reducers", "reduce_image", "round_trip")

from typing import Callable, Dict, Optional

import numpy as np

from .._datastructures import FusedMatrix, MultiMatrix
from ..deviation import epsilon_deviation
from ..fusion import crop, fuse, iter_blocks, pad
from ..fusion._blocks import block_values
from ..metrics import nn_magnify
from ..reducers import (
    DEFAULT_PENALTY_CANDIDATES,
    parse_method,
    penalty_reduce,
    reduce_array,
)

ReducerType = Callable[[MultiMatrix, int, Optional[float]], FusedMatrix]


class _Reducers(Dict[str, ReducerType]):
    def __init__(self):
        super().__init__()

    def add(self, name: str, force: bool = False) -> Callable[[ReducerType], None]:
        def _(func: ReducerType):
            if name in self and not force:
                raise ValueError(f"Reducer {name} already registered")
            self[name] = func
            return None

        return _

    def remove(self, name: str):
        del self[name]

    def lookup(self, method: str) -> ReducerType:
        """
        The reducer for ``method``. Names without a registered reducer are parsed as
        plain baselines (``mean``, ``k0.25``, ...).
        """
        reducer = self.get(method)
        if reducer is not None:
            return reducer
        agg = parse_method(method)

        def _plain(m: MultiMatrix, r: int, eps: Optional[float]) -> FusedMatrix:
            out = reduce_array(block_values(m.data, r), agg)
            return FusedMatrix(out, block_size=r)

        return _plain


reducers: _Reducers = _Reducers()
reducers.__doc__ = """
Named block reducers used by the image experiments.

A reducer takes a matrix whose dimensions are multiples of ``r``, the block size and
an optional epsilon, and returns the fused matrix. ``md`` and ``penalty`` are
registered here; every plain baseline understood by
:func:`~devfuse.reducers.parse_method` is available through ``lookup()`` without
registration.

Example
-------
.. code-block:: python

    from devfuse.image import reducers
    @reducers.add("max-min")
    def _(m, r, eps):
        ...
"""


@reducers.add("md")
def _(m: MultiMatrix, r: int, eps: Optional[float]) -> FusedMatrix:
    if eps is None:
        raise ValueError("The md reducer needs an epsilon")
    return fuse(m, r, epsilon_deviation(eps))


@reducers.add("penalty")
def _(m: MultiMatrix, r: int, eps: Optional[float]) -> FusedMatrix:
    out = np.empty((m.rows // r, m.cols // r, m.channels))
    for block in iter_blocks(m, r):
        alpha, beta = block.origin
        out[alpha - 1, beta - 1] = penalty_reduce(block, DEFAULT_PENALTY_CANDIDATES)
    return FusedMatrix(out, block_size=r)


def reduce_image(
    m: MultiMatrix, method: str, r: int, eps: Optional[float] = None
) -> FusedMatrix:
    """
    Reduce every ``r x r`` block of ``m`` with the named method. ``m`` is edge-padded
    to multiples of ``r`` first. ``eps`` is required by ``md`` and ignored otherwise.
    """
    return reducers.lookup(method)(pad(m, r), r, eps)


def round_trip(
    m: MultiMatrix, method: str, r: int, eps: Optional[float] = None
) -> MultiMatrix:
    """Pad, reduce, magnify back by nearest neighbour and crop to the size of ``m``."""
    return crop(nn_magnify(reduce_image(m, method, r, eps), r), m.rows, m.cols)
