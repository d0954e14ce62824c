"""The reduce, magnify and compare experiment over a set of images."""

__all__ = (
    "DEFAULT_METHODS",
    "ReductionReport",
    "MethodSummary",
    "check_methods",
    "evaluate_images",
    "run_reduction_experiment",
    "write_reports",
    "summarize",
    "epsilon_sweep",
    "synthetic_images",
)

import csv
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .._datastructures import MultiMatrix
from .._utils import atomic_write, format_dt, make_rng
from ..deviation._functions import check_epsilon
from ..metrics import SsimConfig, mse, ssim_image
from ..reducers import parse_method
from ._io import ImageFile, PathLike, load_directory
from ._reducers import reducers, round_trip

logger = logging.getLogger(__name__)

DEFAULT_METHODS: Tuple[str, ...] = (
    "md",
    "mean",
    "median",
    "gaussian",
    "geomean",
    "k0.25",
    "k0.5",
    "k0.75",
    "cowa",
    "penalty",
)

REPORT_COLUMNS = ("image", "method", "r", "eps", "ssim", "mse", "time_ns")
SWEEP_COLUMNS = ("eps", "count")


class ReductionReport(NamedTuple):
    image: str
    method: str
    r: int
    eps: Optional[float]
    """Set for ``md`` rows only."""
    ssim: float
    mse: float
    time_ns: int
    """Wall time of the round trip (reduction and magnification)."""

    def sort_key(self) -> Tuple[str, str, float]:
        return (self.image, self.method, -math.inf if self.eps is None else self.eps)

    def to_row(self) -> List[str]:
        return [
            self.image,
            self.method,
            str(self.r),
            "" if self.eps is None else repr(self.eps),
            repr(self.ssim),
            repr(self.mse),
            str(self.time_ns),
        ]


class MethodSummary(NamedTuple):
    method: str
    eps: Optional[float]
    ssim: float
    mse: float
    count: int


def check_methods(methods: Sequence[str]) -> List[str]:
    """Normalize method names, failing early on unknown ones."""
    out: List[str] = []
    for method in methods:
        name = method.strip().lower()
        if name not in reducers:
            name = parse_method(name).name
        if name not in out:
            out.append(name)
    if not out:
        raise ValueError("At least one method is required")
    return out


def _tasks(
    images: Sequence[ImageFile], methods: Sequence[str], eps_list: Sequence[float]
) -> List[Tuple[ImageFile, str, Optional[float]]]:
    tasks: List[Tuple[ImageFile, str, Optional[float]]] = []
    for img in images:
        for method in methods:
            if method == "md":
                tasks.extend((img, method, float(eps)) for eps in eps_list)
            else:
                tasks.append((img, method, None))
    return tasks


def _evaluate(
    img: ImageFile, method: str, r: int, eps: Optional[float], cfg: SsimConfig
) -> ReductionReport:
    start = time.perf_counter_ns()
    recon = round_trip(img.image, method, r, eps)
    elapsed = time.perf_counter_ns() - start
    return ReductionReport(
        img.name,
        method,
        r,
        eps,
        ssim_image(img.image, recon, cfg),
        mse(img.image, recon),
        elapsed,
    )


def evaluate_images(
    images: Sequence[ImageFile],
    methods: Sequence[str],
    r: int,
    eps_list: Sequence[float],
    ssim_cfg: SsimConfig = SsimConfig(),
    threads: int = 1,
) -> List[ReductionReport]:
    """
    Run every method on every image and score the reconstructions.

    ``md`` produces one report per value of ``eps_list``. Reports are sorted by
    ``(image, method, eps)`` whatever the number of threads.
    """
    methods = check_methods(methods)
    for eps in eps_list:
        check_epsilon(eps)
    if "md" in methods and len(eps_list) == 0:
        raise ValueError("The md method needs at least one epsilon")
    if threads < 1:
        raise ValueError(f"threads must be at least 1, got {threads}")

    tasks = _tasks(images, methods, eps_list)
    logger.info(
        "Evaluating %d reductions (%d images, r = %d, %d threads)",
        len(tasks),
        len(images),
        r,
        threads,
    )
    if threads == 1:
        reports = [_evaluate(img, m, r, eps, ssim_cfg) for img, m, eps in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_evaluate, img, m, r, eps, ssim_cfg) for img, m, eps in tasks
            ]
            reports = [f.result() for f in futures]
    return sorted(reports, key=ReductionReport.sort_key)


def write_reports(reports: Sequence[ReductionReport], path: PathLike) -> None:
    with atomic_write(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        writer.writerows(report.to_row() for report in reports)


def summarize(reports: Sequence[ReductionReport]) -> List[MethodSummary]:
    """Mean SSIM and MSE per ``(method, eps)``, sorted by method then eps."""
    groups: Dict[Tuple[str, Optional[float]], List[ReductionReport]] = {}
    for report in reports:
        groups.setdefault((report.method, report.eps), []).append(report)

    out = [
        MethodSummary(
            method,
            eps,
            math.fsum(r.ssim for r in group) / len(group),
            math.fsum(r.mse for r in group) / len(group),
            len(group),
        )
        for (method, eps), group in groups.items()
    ]
    return sorted(out, key=lambda s: (s.method, -math.inf if s.eps is None else s.eps))


def run_reduction_experiment(
    directory: PathLike,
    methods: Sequence[str] = DEFAULT_METHODS,
    r: int = 2,
    eps_list: Sequence[float] = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0),
    out_csv: Optional[PathLike] = None,
    ssim_cfg: SsimConfig = SsimConfig(),
    threads: int = 1,
) -> List[ReductionReport]:
    """
    Reduce every image in ``directory`` with each method, magnify the result back by
    nearest neighbour, and compare it with the original by SSIM and MSE.

    Parameters
    ----------
    directory
        Folder of PNG/PPM images. Undecodable files are skipped with a warning.
    methods
        Method names, see :data:`DEFAULT_METHODS`.
    r
        Block size.
    eps_list
        Epsilons tried by the ``md`` method.
    out_csv
        When given, the reports are written there as CSV with columns
        ``image,method,r,eps,ssim,mse,time_ns``.
    ssim_cfg
        SSIM window and constants.
    threads
        Number of worker threads.

    Raises
    ------
    NoImagesError
        If ``directory`` holds no decodable image.
    """
    images = load_directory(directory)
    reports = evaluate_images(images, methods, r, eps_list, ssim_cfg, threads)
    if out_csv is not None:
        write_reports(reports, out_csv)

    for s in summarize(reports):
        logger.info(
            "%-10s eps=%-8s ssim=%.6f mse=%.6f",
            s.method,
            "" if s.eps is None else f"{s.eps:g}",
            s.ssim,
            s.mse,
        )
    total = sum(report.time_ns for report in reports)
    logger.info("Total reduction time %s", format_dt(total))
    return reports


def sweep_counts(
    reports: Sequence[ReductionReport], eps_list: Sequence[float]
) -> List[Tuple[float, int]]:
    best_other: Dict[str, float] = {}
    md: Dict[Tuple[str, float], float] = {}
    images: List[str] = []
    for report in reports:
        if report.image not in images:
            images.append(report.image)
        if report.method == "md":
            assert report.eps is not None
            md[(report.image, report.eps)] = report.ssim
        else:
            best_other[report.image] = max(
                best_other.get(report.image, -math.inf), report.ssim
            )

    return [
        (
            float(eps),
            sum(
                1
                for image in images
                if md[(image, float(eps))] > best_other.get(image, -math.inf)
            ),
        )
        for eps in eps_list
    ]


def epsilon_sweep(
    directory: PathLike,
    eps_list: Sequence[float],
    r: int = 2,
    out_csv: Optional[PathLike] = None,
    methods: Sequence[str] = DEFAULT_METHODS,
    ssim_cfg: SsimConfig = SsimConfig(),
    threads: int = 1,
) -> List[Tuple[float, int]]:
    """
    For each epsilon, count the images on which ``md`` gets a strictly higher SSIM
    than every other enabled method.

    ``md`` is always enabled. An empty ``eps_list`` gives an empty table.
    """
    if len(eps_list) == 0:
        return []
    images = load_directory(directory)
    methods = ["md", *(m for m in methods if m != "md")]
    reports = evaluate_images(images, methods, r, eps_list, ssim_cfg, threads)
    table = sweep_counts(reports, eps_list)
    if out_csv is not None:
        with atomic_write(out_csv, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(SWEEP_COLUMNS)
            writer.writerows((repr(eps), str(count)) for eps, count in table)
    return table


def synthetic_images(
    count: int, rows: int = 64, cols: int = 64, seed: int = 0
) -> List[ImageFile]:
    """
    Seeded smooth RGB test images: a few random low frequency waves per channel,
    scaled into ``[0.05, 0.95]``, plus mild noise.
    """
    rng = make_rng(seed)
    y, x = np.mgrid[0:rows, 0:cols].astype(np.float64)
    images: List[ImageFile] = []
    for i in range(count):
        channels = []
        for _ in range(3):
            plane = np.zeros((rows, cols))
            for _ in range(3):
                fx, fy = rng.uniform(0.5, 3.0, size=2)
                phase = rng.uniform(0, 2 * np.pi)
                plane += rng.uniform(0.5, 1.0) * np.sin(
                    2 * np.pi * (fx * x / cols + fy * y / rows) + phase
                )
            lo, hi = plane.min(), plane.max()
            plane = 0.05 + 0.9 * (plane - lo) / (hi - lo if hi > lo else 1.0)
            channels.append(plane)
        data = np.stack(channels, axis=-1) + rng.normal(0, 0.02, (rows, cols, 3))
        images.append(
            ImageFile(Path(f"synthetic-{i:03d}.png"), MultiMatrix(np.clip(data, 0, 1)))
        )
    return images
