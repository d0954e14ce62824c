__all__ = ("load_preferences", "load_expert_weights", "save_decision")

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union, cast

from .._utils import atomic_write
from ..types import ExpertEntry, InvalidWeightsError, PreferenceFile, ShapeError
from ._collective import DEFAULT_DIAGONAL, Decision, PreferenceTensor

PathLike = Union[str, "os.PathLike[str]"]


def _read_json(path: PathLike) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}: invalid JSON: {e}") from None


def _is_matrix(value: Any) -> bool:
    return isinstance(value, list) and all(
        isinstance(row, list) for row in cast(List[Any], value)
    )


def load_preferences(
    path: PathLike, diagonal: float = DEFAULT_DIAGONAL
) -> PreferenceTensor:
    """
    Read ``{"alternatives": p, "experts": [{"name": ..., "matrix": [[...]]}, ...]}``.
    Experts without a name are called ``e1``, ``e2``, ...
    """
    raw = _read_json(path)
    if not isinstance(raw, dict) or "experts" not in raw:
        raise ValueError(f"{path}: expected an object with an 'experts' list")
    content = cast(PreferenceFile, raw)
    experts = content["experts"]
    if not isinstance(experts, list):
        raise ValueError(f"{path}: 'experts' must be a list of expert objects")
    if not experts:
        raise ShapeError(f"{path}: no experts")

    p = content.get("alternatives")
    if p is not None and (isinstance(p, bool) or not isinstance(p, int)):
        raise ValueError(f"{path}: 'alternatives' must be an integer")
    names: List[str] = []
    matrices: List[List[List[float]]] = []
    for i, entry in enumerate(cast(List[Any], experts)):
        if not isinstance(entry, dict) or not _is_matrix(
            cast(Dict[str, Any], entry).get("matrix")
        ):
            raise ValueError(
                f"{path}: expert {i + 1} needs a 'matrix' given as a list of rows"
            )
        expert = cast(ExpertEntry, entry)
        matrix = expert["matrix"]
        if p is not None and (
            len(matrix) != p or any(len(row) != p for row in matrix)
        ):
            raise ShapeError(
                f"{path}: expert {i + 1} must have a {p}x{p} preference matrix"
            )
        names.append(str(expert.get("name", f"e{i + 1}")))
        matrices.append(matrix)
    return PreferenceTensor.from_matrices(matrices, diagonal, names)


def load_expert_weights(path: PathLike, names: Sequence[str] = ()) -> List[float]:
    """
    Read expert weights: either a list in expert order, or an object mapping expert
    names to weights (then every name in ``names`` must be present).
    """
    raw = _read_json(path)
    if isinstance(raw, list):
        return [float(w) for w in cast(List[Any], raw)]
    if isinstance(raw, dict):
        mapping = cast(Dict[str, Any], raw)
        missing = [name for name in names if name not in mapping]
        if missing or not names:
            raise InvalidWeightsError(
                f"{path}: no weight for experts {', '.join(missing) or '(unnamed)'}"
            )
        return [float(mapping[name]) for name in names]
    raise InvalidWeightsError(f"{path}: expected a list or an object of weights")


def save_decision(decision: Decision, path: PathLike) -> None:
    """Write ``{"collective": ..., "column": ..., "ranking": ...}`` atomically."""
    with atomic_write(Path(path), "w", encoding="utf-8") as f:
        json.dump(decision.to_json(), f, indent=2)
        f.write("\n")
