import copy
import functools
import json
import logging
import logging.config
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

import click

import devfuse

from . import _utils
from ._selftest import run_selftest
from .decision import decide as decide_preferences
from .decision import load_expert_weights, load_preferences, save_decision
from .image import (
    DEFAULT_METHODS,
    bench_windows,
    epsilon_sweep,
    run_reduction_experiment,
    speedups,
    summarize,
)
from .metrics import SsimConfig
from .pooling import gradient_check

F = TypeVar("F", bound=Callable[..., Any])

LOG_LEVELS = ["critical", "error", "warning", "info", "debug"]

LOGGING_CONFIG: Dict[str, Any] = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "default": {"format": "%(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "default": {
            "formatter": "default",
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        "devfuse": {"handlers": ["default"], "level": "WARNING", "propagate": False},
        "py.warnings": {"handlers": ["default"], "level": "WARNING"},
    },
}


def configure_logging(log_level: str) -> None:
    config = copy.deepcopy(LOGGING_CONFIG)
    config["loggers"]["devfuse"]["level"] = log_level.upper()
    logging.config.dictConfig(config)
    logging.captureWarnings(True)


class CommaList(click.ParamType):
    """A comma separated list of ints or floats, e.g. ``1,2,4``."""

    def __init__(self, item: Callable[[str], Any]) -> None:
        self.item = item
        self.name = f"{item.__name__}[,{item.__name__}...]"

    def convert(
        self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]
    ) -> List[Any]:
        if isinstance(value, (list, tuple)):
            return list(value)  # type: ignore[arg-type]
        parts = [p.strip() for p in str(value).split(",") if p.strip()]
        try:
            return [self.item(p) for p in parts]
        except ValueError:
            self.fail(f"{value!r} is not a comma separated list of {self.name}")


def common_options(func: F) -> F:
    """``--seed`` and ``--log-level``, shared by every subcommand."""

    @click.option(
        "--seed",
        type=int,
        default=0,
        show_default=True,
        help=f"Random seed. {_utils.SEED_ENV_VAR} overrides it when set.",
    )
    @click.option(
        "--log-level",
        type=click.Choice(LOG_LEVELS),
        default="warning",
        show_default=True,
        help="Log level for progress messages on stderr.",
    )
    @functools.wraps(func)
    def wrapper(*args: Any, seed: int, log_level: str, **kwargs: Any) -> Any:
        configure_logging(log_level)
        seed = _utils.resolve_seed(seed)
        ctx = click.get_current_context()
        config = {
            "command": ctx.info_name,
            **ctx.params,
            "seed": seed,
            "version": devfuse.__version__,
        }
        click.echo(json.dumps(config, sort_keys=True, default=str), err=True)
        return func(*args, seed=seed, **kwargs)

    return wrapper  # type: ignore[return-value]


def threads_option(func: F) -> F:
    return click.option(
        "--threads",
        type=click.IntRange(min=1),
        default=1,
        show_default=True,
        help="Worker threads for batch processing.",
    )(func)


@click.group()  # pyright: ignore[reportUnknownMemberType]
@click.version_option(devfuse.__version__, prog_name="devfuse")
def cli() -> None:
    """Moderate deviation fusion of matrices of n-tuples."""


@cli.command(
    help="""Reduce every image in a directory with each method, magnify it back and
score it against the original by SSIM and MSE.

\b
Writes one CSV row per (image, method, eps):
  image,method,r,eps,ssim,mse,time_ns
"""
)
@click.option(
    "--input",
    "input_dir",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
    help="Directory of PNG/PPM images.",
)
@click.option(
    "--methods",
    type=CommaList(str),
    default=",".join(DEFAULT_METHODS),
    show_default=True,
    help="Reduction methods.",
)
@click.option(
    "--r",
    "r",
    type=click.IntRange(min=2),
    default=2,
    show_default=True,
    help="Block size.",
)
@click.option(
    "--eps",
    type=CommaList(float),
    default="1,2,4,8,16,32",
    show_default=True,
    help="Epsilons for the md method.",
)
@click.option(
    "--window",
    type=click.IntRange(min=2),
    default=8,
    show_default=True,
    help="SSIM window size.",
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default="report.csv",
    show_default=True,
    help="CSV report.",
)
@threads_option
@common_options
def fuse(
    input_dir: Path,
    methods: Sequence[str],
    r: int,
    eps: Sequence[float],
    window: int,
    out: Path,
    threads: int,
    seed: int,
) -> None:
    reports = run_reduction_experiment(
        input_dir, methods, r, eps, out, SsimConfig(window), threads
    )
    click.echo(f"{'method':<10} {'eps':>8} {'ssim':>10} {'mse':>10}")
    for s in summarize(reports):
        eps_text = "" if s.eps is None else f"{s.eps:g}"
        click.echo(f"{s.method:<10} {eps_text:>8} {s.ssim:>10.6f} {s.mse:>10.6f}")


@cli.command(
    "sweep-eps",
    help="""For each epsilon, count the images on which md gets a strictly better SSIM
than every other method. Writes eps,count rows.""",
)
@click.option(
    "--input",
    "input_dir",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
    help="Directory of PNG/PPM images.",
)
@click.option(
    "--eps",
    type=CommaList(float),
    default="1,2,4,8,16,32",
    show_default=True,
    help="Epsilons to sweep.",
)
@click.option(
    "--methods",
    type=CommaList(str),
    default=",".join(DEFAULT_METHODS),
    show_default=True,
    help="Methods md competes against.",
)
@click.option(
    "--r",
    "r",
    type=click.IntRange(min=2),
    default=2,
    show_default=True,
    help="Block size.",
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default="sweep.csv",
    show_default=True,
    help="CSV table.",
)
@threads_option
@common_options
def sweep_eps(
    input_dir: Path,
    eps: Sequence[float],
    methods: Sequence[str],
    r: int,
    out: Path,
    threads: int,
    seed: int,
) -> None:
    table = epsilon_sweep(
        input_dir, eps, r, out, methods=methods, ssim_cfg=SsimConfig(), threads=threads
    )
    for value, count in table:
        click.echo(f"{value:g}\t{count}")


@cli.command(
    help="""Time the epsilon closed form against the penalty reducer on random
3-channel windows. Writes r,method,windows,time_ns,speedup rows."""
)
@click.option(
    "--r-list",
    type=CommaList(int),
    default="2,4,8",
    show_default=True,
    help="Window sizes.",
)
@click.option(
    "--windows",
    type=click.IntRange(min=1),
    default=500,
    show_default=True,
    help="Windows per size.",
)
@click.option(
    "--repeat",
    type=click.IntRange(min=1),
    default=3,
    show_default=True,
    help="Timing repeats; the best is kept.",
)
@click.option("--eps", type=float, default=1.0, show_default=True, help="Epsilon.")
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default="bench.csv",
    show_default=True,
    help="CSV timings.",
)
@common_options
def bench(
    r_list: Sequence[int], windows: int, repeat: int, eps: float, out: Path, seed: int
) -> None:
    reports = bench_windows(r_list, windows, out, seed, eps, repeat)
    ratios = speedups(reports)
    for report in reports:
        click.echo(
            f"r={report.r} {report.method:<8} {_utils.format_dt(report.time_ns):>10}"
        )
    for r, ratio in ratios.items():
        click.echo(f"r={r} speedup {ratio:.1f}x")


@cli.command(
    "pool-grad-check",
    help="""Check the analytic MD/LMD pooling gradients against central finite
differences on random inputs. Every entry of the input and weight Jacobians is
compared by relative error; only entries below 1e-8 on both sides are compared
absolutely.""",
)
@click.option(
    "--trials",
    type=click.IntRange(min=1),
    default=1000,
    show_default=True,
    help="Random trials.",
)
@click.option(
    "--r",
    "r_list",
    type=CommaList(int),
    default="2,3",
    show_default=True,
    help="Window sizes.",
)
@click.option(
    "--eps",
    type=CommaList(float),
    default="1,2,32",
    show_default=True,
    help="Epsilons.",
)
@click.option("--h", type=float, default=1e-6, show_default=True, help="Step size.")
@click.option(
    "--tolerance",
    type=float,
    default=1e-6,
    show_default=True,
    help="Largest acceptable relative error.",
)
@common_options
def pool_grad_check(
    trials: int,
    r_list: Sequence[int],
    eps: Sequence[float],
    h: float,
    tolerance: float,
    seed: int,
) -> None:
    report = gradient_check(trials, r_list, eps, seed, h, tolerance=tolerance)
    click.echo(f"max relative error (inputs):  {report.max_input_error:.3e}")
    click.echo(f"max relative error (weights): {report.max_weight_error:.3e}")
    click.echo("PASS" if report.passed else "FAIL")
    if not report.passed:
        raise RuntimeError(
            f"Gradient check failed: {report.max_error:.3e} >= {tolerance:g}"
        )


@cli.command(
    help="""Fuse expert preference matrices into a collective matrix, compute the
preference column and rank the alternatives.

\b
Input:  {"alternatives": p, "experts": [{"name": ..., "matrix": [[...]]}, ...]}
Output: {"collective": [[...]], "column": [...], "ranking": [...]}
"""
)
@click.option(
    "--input",
    "input_file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="Preference JSON.",
)
@click.option(
    "--weights",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Expert weights JSON (list, or object by expert name). Default: equal.",
)
@click.option("--eps", type=float, default=1.0, show_default=True, help="Epsilon.")
@click.option(
    "--diagonal",
    type=float,
    default=0.5,
    show_default=True,
    help="Value every self-preference must have.",
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Output JSON. Default: stdout.",
)
@common_options
def decide(
    input_file: Path,
    weights: Optional[Path],
    eps: float,
    diagonal: float,
    out: Optional[Path],
    seed: int,
) -> None:
    prefs = load_preferences(input_file, diagonal)
    w = None if weights is None else load_expert_weights(weights, prefs.names)
    decision = decide_preferences(prefs, w, eps)
    if out is None:
        click.echo(json.dumps(decision.to_json(), indent=2))
    else:
        save_decision(decision, out)
        click.echo("ranking: " + " ".join(str(i) for i in decision.ranking))


@cli.command(
    help="""Run the randomized consistency suites: closed form against bisection,
idempotency, internality, symmetry, the large-epsilon limit and pooling/fusion
agreement."""
)
@click.option(
    "--cases",
    type=click.IntRange(min=1),
    default=1000,
    show_default=True,
    help="Random cases per suite.",
)
@common_options
def selftest(cases: int, seed: int) -> None:
    results = run_selftest(cases, seed)
    for result in results:
        click.echo(str(result))
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise RuntimeError(f"Self test failed: {', '.join(failed)}")


def dispatch(args: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line and return its exit code: 0 on success, 1 for invalid
    usage or input, 2 for any other failure. Errors are reported as a single
    ``Error: ...`` line on stderr.
    """
    try:
        cli.main(
            args=list(args) if args is not None else None,
            prog_name="devfuse",
            standalone_mode=False,
        )
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 2
    except ValueError as e:
        # Includes the FusionError subclasses that signal bad input.
        click.echo(f"Error: {e}", err=True)
        return 1
    except Exception as e:
        click.echo(f"Error: {e}", err=True)
        return 2
    return 0


def main() -> None:
    sys.exit(dispatch())
