"""Moderate deviation fusion of matrices of n-tuples."""

__version__ = "0.1.0"

# User-facing subpackages
from . import decision
from . import deviation
from . import fusion
from . import image
from . import metrics
from . import pooling
from . import reducers
from . import types

# Core containers and the most used entry points
from ._datastructures import Block, FusedMatrix, Interval, MultiMatrix
from .deviation import (
    DeviationSpec,
    SolverConfig,
    d_mean_bisect,
    d_mean_epsilon_closed,
    deviation_mean,
    epsilon_deviation,
    two_point_epsilon,
)
from .fusion import WeightSpec, fuse, pad
from .types import FusionError

__all__ = (
    # public sub-packages
    "decision",
    "deviation",
    "fusion",
    "image",
    "metrics",
    "pooling",
    "reducers",
    "types",
    # _datastructures.py
    "Block",
    "FusedMatrix",
    "Interval",
    "MultiMatrix",
    # deviation
    "DeviationSpec",
    "SolverConfig",
    "d_mean_bisect",
    "d_mean_epsilon_closed",
    "deviation_mean",
    "epsilon_deviation",
    "two_point_epsilon",
    # fusion
    "WeightSpec",
    "fuse",
    "pad",
    # types.py
    "FusionError",
)
