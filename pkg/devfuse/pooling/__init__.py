"""Pooling by the epsilon deviation mean, with analytic gradients."""

from ._gradcheck import (
    GradCheckReport,
    analytic_jacobians,
    gradient_check,
    numeric_gradients,
    numeric_jacobians,
)
from ._pool import (
    PoolMode,
    PoolParams,
    average_pool,
    md_pool_backward,
    md_pool_forward,
)

__all__ = (
    # _pool.py
    "PoolMode",
    "PoolParams",
    "average_pool",
    "md_pool_backward",
    "md_pool_forward",
    # _gradcheck.py
    "GradCheckReport",
    "analytic_jacobians",
    "gradient_check",
    "numeric_gradients",
    "numeric_jacobians",
)
