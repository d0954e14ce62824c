"""Timing comparison of the epsilon closed form against the penalty reducer."""

__all__ = (
    "BENCH_SEED",
    "BenchReport",
    "random_windows",
    "bench_windows",
    "speedups",
    "write_bench",
)

import csv
import functools
import logging
import time
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence

from .._datastructures import Block, FloatArray
from .._utils import atomic_write, format_dt, make_rng
from ..deviation import d_mean_epsilon_closed
from ..reducers import DEFAULT_PENALTY_CANDIDATES, AggregatorId, penalty_reduce
from ._io import PathLike

logger = logging.getLogger(__name__)

# Windows are uniform samples in [0, 1) drawn from this seed unless told otherwise.
BENCH_SEED = 500

BENCH_COLUMNS = ("r", "method", "windows", "time_ns", "speedup")


class BenchReport(NamedTuple):
    r: int
    method: str
    windows: int
    time_ns: int
    """Best total over the repeats."""


def random_windows(r: int, count: int, seed: int = BENCH_SEED) -> FloatArray:
    """``count`` windows of shape ``(r, r, 3)``; the same seed gives the same windows."""
    return make_rng(seed).uniform(0.0, 1.0, size=(count, r, r, 3))


def _best_of(repeat: int, run: Callable[[], None]) -> int:
    best: Optional[int] = None
    for _ in range(repeat):
        start = time.perf_counter_ns()
        run()
        dt = time.perf_counter_ns() - start
        best = dt if best is None else min(best, dt)
    assert best is not None
    return best


def _md_pass(channel_rows: Sequence[FloatArray], epsilon: float) -> None:
    for rows in channel_rows:
        d_mean_epsilon_closed(rows, epsilon=epsilon)


def _penalty_pass(blocks: Sequence[Block], candidates: Sequence[AggregatorId]) -> None:
    for block in blocks:
        penalty_reduce(block, candidates)


def bench_windows(
    r_list: Sequence[int] = (2, 4, 8),
    window_count: int = 500,
    out_csv: Optional[PathLike] = None,
    seed: int = BENCH_SEED,
    epsilon: float = 1.0,
    repeat: int = 3,
    candidates: Sequence[AggregatorId] = DEFAULT_PENALTY_CANDIDATES,
) -> List[BenchReport]:
    """
    Time the reduction of ``window_count`` random 3-channel windows per block size.

    For every ``r`` the ``md`` row times :func:`~devfuse.deviation.d_mean_epsilon_closed`
    over the three channels of each window, and the ``penalty`` row times
    :func:`~devfuse.reducers.penalty_reduce` with ``candidates``. Each total is the
    best of ``repeat`` runs.
    """
    if window_count < 1:
        raise ValueError(f"window_count must be at least 1, got {window_count}")
    if repeat < 1:
        raise ValueError(f"repeat must be at least 1, got {repeat}")

    reports: List[BenchReport] = []
    for r in r_list:
        windows = random_windows(r, window_count, seed)
        channel_rows = [w.transpose(2, 0, 1).reshape(3, r * r) for w in windows]
        blocks = [Block(w) for w in windows]

        md_ns = _best_of(repeat, functools.partial(_md_pass, channel_rows, epsilon))
        penalty_ns = _best_of(
            repeat, functools.partial(_penalty_pass, blocks, candidates)
        )
        logger.info(
            "r=%d: md %s, penalty %s (%.1fx)",
            r,
            format_dt(md_ns),
            format_dt(penalty_ns),
            penalty_ns / max(md_ns, 1),
        )
        reports.append(BenchReport(r, "md", window_count, md_ns))
        reports.append(BenchReport(r, "penalty", window_count, penalty_ns))

    if out_csv is not None:
        write_bench(reports, out_csv)
    return reports


def speedups(reports: Sequence[BenchReport]) -> Dict[int, float]:
    """Penalty time over md time, per block size."""
    times: Dict[int, Dict[str, int]] = {}
    for report in reports:
        times.setdefault(report.r, {})[report.method] = report.time_ns
    return {
        r: t["penalty"] / max(t["md"], 1)
        for r, t in times.items()
        if "md" in t and "penalty" in t
    }


def write_bench(reports: Sequence[BenchReport], path: PathLike) -> None:
    ratio = speedups(reports)
    with atomic_write(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(BENCH_COLUMNS)
        for report in reports:
            writer.writerow(
                [
                    report.r,
                    report.method,
                    report.windows,
                    report.time_ns,
                    f"{ratio[report.r]:.3f}" if report.r in ratio else "",
                ]
            )
