"""Group decision making: fuse expert preference relations and rank alternatives."""

__all__ = (
    "DEFAULT_DIAGONAL",
    "PreferenceTensor",
    "PreferenceColumn",
    "Decision",
    "collective_matrix",
    "preference_column",
    "rank_alternatives",
    "decide",
)

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .._datastructures import FloatArray
from .._docstring import doc_format
from ..deviation import d_mean_epsilon_closed
from ..types import DecisionFile, DomainError, ShapeError

# Indifference: an alternative compared with itself.
DEFAULT_DIAGONAL = 0.5


@dataclass(frozen=True, eq=False)
class PreferenceTensor:
    """
    Pairwise preferences of ``n`` experts over ``p`` alternatives, as a
    ``(p, p, n)`` array. Entry ``[i, j, k]`` is how much expert ``k`` prefers
    alternative ``i`` over ``j``; every diagonal entry equals ``diagonal``.
    """

    data: FloatArray
    diagonal: float = DEFAULT_DIAGONAL
    names: Tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        arr = np.array(self.data, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[:, :, np.newaxis]
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1]:
            raise ShapeError(
                f"Preferences must have shape (p, p, n), got {np.shape(self.data)}"
            )
        if arr.shape[0] < 2:
            raise ShapeError("At least two alternatives are required")
        if arr.shape[2] < 1:
            raise ShapeError("At least one expert is required")
        if not np.isfinite(arr).all() or np.any(arr < 0) or np.any(arr > 1):
            raise DomainError("Preference values must lie in [0, 1]")
        diag = arr[np.arange(arr.shape[0]), np.arange(arr.shape[0]), :]
        if np.any(diag != self.diagonal):
            raise DomainError(
                f"Every diagonal preference must equal {self.diagonal:g}"
            )
        if self.names and len(self.names) != arr.shape[2]:
            raise ShapeError(
                f"Got {len(self.names)} expert names for {arr.shape[2]} experts"
            )
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "names", tuple(self.names))

    @classmethod
    def from_matrices(
        cls,
        matrices: Sequence[npt.ArrayLike],
        diagonal: float = DEFAULT_DIAGONAL,
        names: Sequence[str] = (),
    ) -> "PreferenceTensor":
        """Stack one ``p x p`` matrix per expert."""
        if len(matrices) == 0:
            raise ShapeError("At least one expert is required")
        stacked = np.stack([np.asarray(m, dtype=np.float64) for m in matrices], -1)
        return cls(stacked, diagonal, tuple(names))

    @property
    def alternatives(self) -> int:
        return int(self.data.shape[0])

    @property
    def experts(self) -> int:
        return int(self.data.shape[2])


@dataclass(frozen=True)
class PreferenceColumn:
    values: Tuple[float, ...]
    """``d_i`` for each alternative."""
    ranking: Tuple[int, ...]
    """Alternatives numbered from 1, most preferred first."""


@dataclass(frozen=True, eq=False)
class Decision:
    collective: FloatArray
    column: PreferenceColumn

    @property
    def ranking(self) -> Tuple[int, ...]:
        return self.column.ranking

    def to_json(self) -> DecisionFile:
        return {
            "collective": self.collective.tolist(),
            "column": list(self.column.values),
            "ranking": list(self.column.ranking),
        }


@doc_format()
def collective_matrix(
    x: PreferenceTensor, weights: Optional[npt.ArrayLike] = None, epsilon: float = 1.0
) -> FloatArray:
    """
    Fuse the experts' matrices entry by entry:
    ``c_ij = sum_k(w_k x_ijk (x_ijk + epsilon)) / sum_k(w_k (x_ijk + epsilon))``.

    Parameters
    ----------
    x
        The expert preferences.
    weights
        One weight per expert. {weights}
    epsilon
        {epsilon}

    Raises
    ------
    InvalidWeightsError
        If the weights are negative, of the wrong length, or all zero.
    """
    return np.asarray(d_mean_epsilon_closed(x.data, weights, epsilon))


def rank_alternatives(d: Sequence[float]) -> List[int]:
    """
    Alternatives numbered from 1, by decreasing ``d``; ties go to the smaller index.
    """
    return [i + 1 for i in sorted(range(len(d)), key=lambda i: (-d[i], i))]


def preference_column(c: npt.ArrayLike, epsilon: float = 1.0) -> PreferenceColumn:
    """
    The unweighted epsilon deviation mean of each row of the collective matrix,
    ``d_i = sum_j(c_ij (c_ij + epsilon)) / (epsilon p + sum_j c_ij)``, and the ranking
    it induces. The diagonal entry is part of each row.
    """
    arr = np.asarray(c, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"The collective matrix must be square, got {arr.shape}")
    d = [float(v) for v in np.atleast_1d(d_mean_epsilon_closed(arr, None, epsilon))]
    return PreferenceColumn(tuple(d), tuple(rank_alternatives(d)))


def decide(
    x: PreferenceTensor, weights: Optional[npt.ArrayLike] = None, epsilon: float = 1.0
) -> Decision:
    """Collective matrix, preference column and ranking in one go."""
    c = collective_matrix(x, weights, epsilon)
    return Decision(c, preference_column(c, epsilon))
