__all__ = ("nn_magnify",)

import numpy as np

from .._datastructures import MultiMatrix
from ..fusion._blocks import check_block_size


def nn_magnify(c: MultiMatrix, r: int) -> MultiMatrix:
    """Nearest neighbour magnification: every entry becomes an ``r x r`` window."""
    check_block_size(r)
    return MultiMatrix(np.repeat(np.repeat(c.data, r, axis=0), r, axis=1))
