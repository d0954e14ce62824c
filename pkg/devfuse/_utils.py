import contextlib
import os
import tempfile
from pathlib import Path
from typing import IO, Any, Iterator, Union

import numpy as np

# ==============================================================================
# Seeds and random streams
# ==============================================================================
SEED_ENV_VAR = "DEVFUSE_SEED"


def resolve_seed(seed: int) -> int:
    """
    Returns the seed to use for a run. A ``DEVFUSE_SEED`` environment variable, when
    set, takes precedence over the value given on the command line.
    """
    env = os.getenv(SEED_ENV_VAR)
    if env is None or env.strip() == "":
        return seed
    try:
        return int(env)
    except ValueError:
        raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


# ==============================================================================
# Files
# ==============================================================================
def _current_umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


@contextlib.contextmanager
def atomic_write(
    path: Union[str, "os.PathLike[str]"], mode: str = "w", **kwargs: Any
) -> Iterator[IO[Any]]:
    """
    Open a temporary file next to ``path`` for writing, and move it over ``path``
    only when the ``with`` block finishes without an error. Readers never observe a
    half-written file.
    """
    target = Path(path)
    fd, tmp = tempfile.mkstemp(
        prefix=f".{target.name}.", suffix=".tmp", dir=str(target.parent)
    )
    try:
        with os.fdopen(fd, mode, **kwargs) as f:
            yield f
        # mkstemp creates 0600 files; use the mode a plain open() would give.
        os.chmod(tmp, 0o666 & ~_current_umask())
        os.replace(tmp, target)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


# ==============================================================================
# Formatting
# ==============================================================================
def format_dt(dt_ns: float) -> str:
    """Human readable duration for a number of nanoseconds."""
    dt = dt_ns / 1e9
    if abs(dt) > 10e-3:
        return "%.1f ms" % (dt * 1e3)
    elif abs(dt) > 10e-6:
        return "%.1f us" % (dt * 1e6)
    else:
        return "%.0f ns" % (dt * 1e9)
