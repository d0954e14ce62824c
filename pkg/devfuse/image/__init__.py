"""Image files, the reduction experiments and the timing benchmark."""

from ._bench import BenchReport, bench_windows, random_windows, speedups
from ._experiment import (
    DEFAULT_METHODS,
    MethodSummary,
    ReductionReport,
    epsilon_sweep,
    evaluate_images,
    run_reduction_experiment,
    summarize,
    synthetic_images,
)
from ._io import ImageFile, load_directory, load_image, save_image
from ._reducers import reduce_image, reducers, round_trip

__all__ = (
    # _io.py
    "ImageFile",
    "load_directory",
    "load_image",
    "save_image",
    # _reducers.py
    "reduce_image",
    "reducers",
    "round_trip",
    # _experiment.py
    "DEFAULT_METHODS",
    "MethodSummary",
    "ReductionReport",
    "epsilon_sweep",
    "evaluate_images",
    "run_reduction_experiment",
    "summarize",
    "synthetic_images",
    # _bench.py
    "BenchReport",
    "bench_windows",
    "random_windows",
    "speedups",
)
