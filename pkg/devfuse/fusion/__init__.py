"""Block decomposition of matrices of n-tuples and their aggregational substitute."""

from ._blocks import (
    PadMode,
    block_interval,
    crop,
    extract_block,
    iter_blocks,
    pad,
    split_channels,
    stack_channels,
)
from ._fuse import WeightMode, WeightSpec, fuse

__all__ = (
    # _blocks.py
    "PadMode",
    "block_interval",
    "crop",
    "extract_block",
    "iter_blocks",
    "pad",
    "split_channels",
    "stack_channels",
    # _fuse.py
    "WeightMode",
    "WeightSpec",
    "fuse",
)
