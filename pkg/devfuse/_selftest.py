"""Randomized consistency suites run by ``devfuse selftest``."""

__all__ = ("SuiteResult", "SUITES", "run_selftest")

import logging
from typing import Callable, Dict, List, NamedTuple, Tuple

import numpy as np

from ._datastructures import MultiMatrix
from ._utils import make_rng
from .deviation import (
    SolverConfig,
    d_mean_bisect,
    d_mean_epsilon_closed,
    epsilon_deviation,
)
from .fusion import block_interval, fuse, iter_blocks
from .pooling import PoolParams, md_pool_forward

logger = logging.getLogger(__name__)

EPSILONS = (1.0, 2.0, 4.0, 32.0)
ORACLE_TOLERANCE = 1e-7
LIMIT_TOLERANCE = 1e-4


class SuiteResult(NamedTuple):
    name: str
    cases: int
    failures: int
    worst: float
    """Largest deviation observed (0 for exact checks)."""

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def __str__(self) -> str:
        status = "ok" if self.passed else f"FAILED ({self.failures} failures)"
        return f"{self.name}: {status}, {self.cases} cases, worst {self.worst:.3g}"


def _random_matrix(
    rng: np.random.Generator, blocks: int = 1
) -> Tuple[MultiMatrix, int]:
    r = int(rng.choice((2, 3, 4)))
    n = int(rng.choice((1, 3)))
    return MultiMatrix(rng.uniform(0, 1, size=(r, r * blocks, n))), r


def oracle_suite(cases: int, rng: np.random.Generator) -> SuiteResult:
    """Closed form against bisection on random block channels."""
    cfg = SolverConfig(tolerance=1e-10, max_iterations=200)
    worst, failures = 0.0, 0
    for _ in range(cases):
        m, _r = _random_matrix(rng)
        eps = float(rng.choice(EPSILONS))
        spec = epsilon_deviation(eps)
        for k in range(m.channels):
            values = m.plane(k).ravel()
            diff = abs(
                float(d_mean_epsilon_closed(values, epsilon=eps))
                - d_mean_bisect(spec, values, cfg=cfg)
            )
            worst = max(worst, diff)
            failures += diff >= ORACLE_TOLERANCE
    return SuiteResult("oracle", cases, failures, worst)


def idempotency_suite(cases: int, rng: np.random.Generator) -> SuiteResult:
    """Constant matrices fuse to the same constant."""
    failures = 0
    for _ in range(cases):
        m, r = _random_matrix(rng, blocks=2)
        constant = MultiMatrix(np.broadcast_to(m.data[:1, :1, :], m.shape))
        fused = fuse(constant, r, epsilon_deviation(float(rng.choice(EPSILONS))))
        failures += not np.array_equal(
            fused.data, np.broadcast_to(m.data[:1, :1, :], fused.shape)
        )
    return SuiteResult("idempotency", cases, failures, 0.0)


def internality_suite(cases: int, rng: np.random.Generator) -> SuiteResult:
    """Every fused value lies in its block channel's interval."""
    failures = 0
    for _ in range(cases):
        m, r = _random_matrix(rng, blocks=2)
        fused = fuse(m, r, epsilon_deviation(float(rng.choice(EPSILONS))))
        for block in iter_blocks(m, r):
            alpha, beta = block.origin
            for k in range(1, m.channels + 1):
                value = float(fused.data[alpha - 1, beta - 1, k - 1])
                failures += not block_interval(block, k).contains(value)
    return SuiteResult("internality", cases, failures, 0.0)


def symmetry_suite(cases: int, rng: np.random.Generator) -> SuiteResult:
    """Permuting the inputs doesn't change the closed form by a single bit."""
    failures = 0
    for _ in range(cases):
        values = rng.uniform(0, 1, size=int(rng.integers(2, 17)))
        eps = float(rng.choice(EPSILONS))
        shuffled = rng.permutation(values)
        same = d_mean_epsilon_closed(values, epsilon=eps) == d_mean_epsilon_closed(
            shuffled, epsilon=eps
        )
        failures += not same
    return SuiteResult("symmetry", cases, failures, 0.0)


def epsilon_limit_suite(cases: int, rng: np.random.Generator) -> SuiteResult:
    """With a huge epsilon, 2x2 blocks fuse to their arithmetic mean."""
    worst, failures = 0.0, 0
    for _ in range(cases):
        m = MultiMatrix(rng.uniform(0, 1, size=(2, 2, 3)))
        fused = fuse(m, 2, epsilon_deviation(1e6)).data.ravel()
        diff = float(np.max(np.abs(fused - m.data.mean(axis=(0, 1)))))
        worst = max(worst, diff)
        failures += diff >= LIMIT_TOLERANCE
    return SuiteResult("epsilon-limit", cases, failures, worst)


def pooling_suite(cases: int, rng: np.random.Generator) -> SuiteResult:
    """Unit-weight MD pooling is bit-identical to block fusion."""
    failures = 0
    for _ in range(cases):
        m, r = _random_matrix(rng, blocks=2)
        eps = float(rng.choice(EPSILONS))
        pooled = md_pool_forward(m.data, PoolParams(r, eps))
        failures += not np.array_equal(pooled, fuse(m, r, epsilon_deviation(eps)).data)
    return SuiteResult("pooling", cases, failures, 0.0)


SUITES: Dict[str, Callable[[int, np.random.Generator], SuiteResult]] = {
    "oracle": oracle_suite,
    "idempotency": idempotency_suite,
    "internality": internality_suite,
    "symmetry": symmetry_suite,
    "epsilon-limit": epsilon_limit_suite,
    "pooling": pooling_suite,
}


def run_selftest(cases: int = 1000, seed: int = 0) -> List[SuiteResult]:
    if cases < 1:
        raise ValueError(f"cases must be at least 1, got {cases}")
    results: List[SuiteResult] = []
    for i, (name, suite) in enumerate(SUITES.items()):
        logger.info("Running the %s suite", name)
        results.append(suite(cases, make_rng(seed + i)))
    return results
