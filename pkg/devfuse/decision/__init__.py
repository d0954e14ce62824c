"""Multi-expert preference fusion."""

from ._collective import (
    DEFAULT_DIAGONAL,
    Decision,
    PreferenceColumn,
    PreferenceTensor,
    collective_matrix,
    decide,
    preference_column,
    rank_alternatives,
)
from ._io import load_expert_weights, load_preferences, save_decision

__all__ = (
    # _collective.py
    "DEFAULT_DIAGONAL",
    "Decision",
    "PreferenceColumn",
    "PreferenceTensor",
    "collective_matrix",
    "decide",
    "preference_column",
    "rank_alternatives",
    # _io.py
    "load_expert_weights",
    "load_preferences",
    "save_decision",
)
