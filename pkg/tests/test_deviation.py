import math

import numpy as np
import pytest

from devfuse.deviation import (
    DeviationKind,
    MonotoneMap,
    SolverConfig,
    basic_deviation,
    d_mean_bisect,
    d_mean_epsilon_closed,
    deviation_mean,
    epsilon_deviation,
    eval_deviation,
    identity,
    linear_deviation,
    odd_power,
    scaled,
    signed_power,
    two_point_epsilon,
)
from devfuse.deviation._means import epsilon_kernel
from devfuse.types import (
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    InvalidWeightsError,
)

EPSILONS = (1.0, 2.0, 4.0, 32.0)


def test_eval_deviation():
    assert eval_deviation(epsilon_deviation(1), 0, 1) == 1.0
    assert eval_deviation(linear_deviation(), 0.4, 0.4) == 0.0
    assert eval_deviation(basic_deviation(), 0.2, 0.7) == pytest.approx(0.5)
    assert eval_deviation(basic_deviation(odd_power(3), scaled(2)), 0, 1) == 8.0

    with pytest.raises(DomainError, match="finite"):
        eval_deviation(linear_deviation(), math.nan, 0.0)
    with pytest.raises(DomainError, match="finite"):
        eval_deviation(linear_deviation(), 0.0, math.inf)


def test_epsilon_must_be_at_least_one():
    for bad in (0.5, 0.0, -3.0, math.inf, math.nan):
        with pytest.raises(DomainError, match="epsilon"):
            epsilon_deviation(bad)
    with pytest.raises(DomainError):
        d_mean_epsilon_closed([0, 1], epsilon=0.99)
    with pytest.raises(DomainError):
        two_point_epsilon(0, 1, 0.5)


def test_monotone_map_validation():
    assert str(signed_power(0.5)) == "signed_power(0.5)"
    assert np.allclose(signed_power(2)(np.array([-2.0, 3.0])), [-4.0, 9.0])

    with pytest.raises(DomainError, match="odd"):
        odd_power(2)
    with pytest.raises(DomainError, match="positive"):
        scaled(0)

    # f must vanish only at 0
    relu = MonotoneMap("relu", lambda t: np.maximum(t, 0))
    with pytest.raises(DomainError, match="only at 0"):
        basic_deviation(f=relu)
    # f must vanish at 0
    shifted = MonotoneMap("shifted", lambda t: t + 1)
    with pytest.raises(DomainError, match="vanish at 0"):
        basic_deviation(f=shifted)
    # s must be strictly increasing
    flat = MonotoneMap.from_callable("flat", lambda t: float(min(t, 1.0)))
    with pytest.raises(DomainError, match="strictly increasing"):
        basic_deviation(s=flat)
    # A user map passing the probes
    cube = MonotoneMap.from_callable("cube", lambda t: t**3)
    spec = basic_deviation(s=cube)
    assert spec.kind is DeviationKind.BASIC
    assert eval_deviation(spec, 1, 2) == 7.0


def test_d_mean_bisect_examples():
    assert d_mean_bisect(linear_deviation(), [0.1, 0.5, 0.9], [1, 1, 1]) == pytest.approx(
        0.5, abs=1e-9
    )
    assert d_mean_bisect(epsilon_deviation(1), [0, 1], [1, 1]) == pytest.approx(
        2 / 3, abs=1e-9
    )
    for spec in (linear_deviation(), epsilon_deviation(3), basic_deviation()):
        assert d_mean_bisect(spec, [0.3] * 4, [1, 2, 3, 4]) == 0.3


def test_d_mean_bisect_weights():
    # Zero weights drop values
    assert d_mean_bisect(linear_deviation(), [0, 1, 5], [1, 1, 0]) == pytest.approx(
        0.5, abs=1e-9
    )
    with pytest.raises(InvalidWeightsError, match="all zero"):
        d_mean_bisect(linear_deviation(), [0, 1], [0, 0])
    with pytest.raises(InvalidWeightsError, match="non-negative"):
        d_mean_bisect(linear_deviation(), [0, 1], [1, -1])
    with pytest.raises(InvalidWeightsError, match="match"):
        d_mean_bisect(linear_deviation(), [0, 1, 2], [1, 1])
    with pytest.raises(DomainError, match="At least one"):
        d_mean_bisect(linear_deviation(), [])
    with pytest.raises(DomainError, match="finite"):
        d_mean_bisect(linear_deviation(), [0, math.nan])


def test_d_mean_bisect_plateau():
    # With f = sign, F vanishes on the whole open interval between two values.
    spec = basic_deviation(f=MonotoneMap("sign", np.sign))
    assert d_mean_bisect(spec, [0, 1], [1, 1]) == pytest.approx(0.5, abs=1e-9)
    assert d_mean_bisect(spec, [0, 1, 2], [1, 1, 1]) == pytest.approx(1.0, abs=1e-9)


def test_d_mean_bisect_convergence_error():
    cfg = SolverConfig(tolerance=1e-12, max_iterations=5)
    with pytest.raises(ConvergenceError) as excinfo:
        d_mean_bisect(linear_deviation(), [0, 1], cfg=cfg)
    lo, hi = excinfo.value.bracket
    assert 0 <= lo < hi <= 1
    assert hi - lo >= cfg.tolerance


def test_solver_config():
    with pytest.raises(DomainError):
        SolverConfig(tolerance=0)
    with pytest.raises(DomainError):
        SolverConfig(max_iterations=0)
    assert SolverConfig(tolerance=1e-3).required_iterations(1.0) == 10
    assert SolverConfig().required_iterations(0.0) == 0


def test_d_mean_epsilon_closed_examples():
    assert d_mean_epsilon_closed([0.2, 0.4, 0.6, 0.8], [1, 1, 1, 1], 1) == pytest.approx(
        3.2 / 6, rel=1e-15
    )
    assert d_mean_epsilon_closed([0, 1, 1, 0], epsilon=1e6) == pytest.approx(
        0.5, abs=1e-6
    )
    for c in (0.0, 0.1, 0.7, 1.0, 123.456):
        for eps in EPSILONS:
            assert d_mean_epsilon_closed([c] * 5, [1, 2, 0, 3, 1], eps) == c


def test_d_mean_epsilon_closed_shapes():
    assert isinstance(d_mean_epsilon_closed([0, 1]), float)
    batch = np.array([[0, 1, 1, 0], [0.2, 0.4, 0.6, 0.8], [0.5] * 4])
    out = d_mean_epsilon_closed(batch)
    assert isinstance(out, np.ndarray)
    assert out.shape == (3,)
    for row, value in zip(batch, out):
        assert d_mean_epsilon_closed(row) == value


def test_d_mean_epsilon_closed_degenerate():
    with pytest.raises(DegenerateInputError, match="zero"):
        d_mean_epsilon_closed([-1.0, -1.0], epsilon=1.0)
    with pytest.raises(DegenerateInputError) as excinfo:
        epsilon_kernel(np.array([[0.0, 1.0], [-1.0, -1.0]]), np.ones((2, 2)), 1.0)
    assert excinfo.value.location == (1,)


def test_d_mean_epsilon_closed_domain():
    # The unclipped quotient would be (6 + 0) / (-2 + 1) = -6, outside the data
    with pytest.raises(DomainError, match="non-negative"):
        d_mean_epsilon_closed([-3.0, 0.0], epsilon=1.0)
    with pytest.raises(DomainError) as excinfo:
        epsilon_kernel(np.array([[0.0, 1.0], [-2.0, 0.0]]), np.ones((2, 2)), 1.0)
    assert excinfo.value.location == (1,)

    # x + epsilon == 0 contributes nothing, and zero weights switch the check off
    assert d_mean_epsilon_closed([-1.0, 1.0], epsilon=1.0) == 1.0
    assert d_mean_epsilon_closed([-5.0, 0.0, 1.0], [0, 1, 1], epsilon=1.0) == 2 / 3
    with pytest.raises(DomainError):
        two_point_epsilon(-3.0, 0.0, 1.0)


def test_two_point_epsilon():
    assert two_point_epsilon(0, 1, 1) == 2 / 3
    assert two_point_epsilon(0.3, 0.3, 32) == pytest.approx(0.3, rel=1e-15)
    for u, v in [(0.1, 0.9), (2.0, 5.0), (0.0, 0.0)]:
        assert two_point_epsilon(u, v, 2) == pytest.approx(
            d_mean_epsilon_closed([u, v], epsilon=2), rel=1e-14
        )
    with pytest.raises(DegenerateInputError):
        two_point_epsilon(-1, -1, 1)


def test_oracle_equivalence():
    rng = np.random.default_rng(2022)
    cfg = SolverConfig()
    worst = 0.0
    for _ in range(10_000):
        r = int(rng.choice((2, 3, 4)))
        n = int(rng.choice((1, 3)))
        eps = float(rng.choice(EPSILONS))
        spec = epsilon_deviation(eps)
        block = rng.uniform(0, 1, size=(n, r * r))
        closed = d_mean_epsilon_closed(block, epsilon=eps)
        for k in range(n):
            diff = abs(closed[k] - d_mean_bisect(spec, block[k], cfg=cfg))
            worst = max(worst, diff)
    assert worst < 1e-7


def test_properties():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        m = int(rng.integers(1, 10))
        x = rng.uniform(0, 1, size=m)
        w = rng.uniform(0.1, 2, size=m)
        eps = float(rng.choice(EPSILONS))
        y = d_mean_epsilon_closed(x, w, eps)

        # Internality
        assert x.min() <= y <= x.max()
        # Symmetry: bit-identical under permutation of (value, weight) pairs
        perm = rng.permutation(m)
        assert d_mean_epsilon_closed(x[perm], w[perm], eps) == y
        # Weight-scale invariance
        lam = float(rng.uniform(0.01, 100))
        assert d_mean_epsilon_closed(x, lam * w, eps) == pytest.approx(y, rel=1e-12)
        # Monotone in each input
        i = int(rng.integers(m))
        bumped = x.copy()
        bumped[i] += float(rng.uniform(0, 1))
        assert d_mean_epsilon_closed(bumped, w, eps) >= y - 1e-12


def test_bisect_properties():
    rng = np.random.default_rng(11)
    specs = [linear_deviation(), basic_deviation(odd_power(3)), epsilon_deviation(2)]
    for _ in range(200):
        x = rng.uniform(-1, 1, size=int(rng.integers(1, 8)))
        w = rng.uniform(0.1, 2, size=x.size)
        for spec in specs:
            if spec.kind is DeviationKind.EPSILON:
                x = np.abs(x)
            y = d_mean_bisect(spec, x, w)
            assert x.min() <= y <= x.max()
            assert d_mean_bisect(spec, x, 5 * w) == pytest.approx(y, abs=1e-8)
            assert d_mean_bisect(spec, x[::-1], w[::-1]) == pytest.approx(y, abs=1e-8)


def test_epsilon_limit():
    rng = np.random.default_rng(3)
    x = rng.uniform(0, 1, size=(100, 4))
    assert np.max(np.abs(d_mean_epsilon_closed(x, epsilon=1e6) - x.mean(axis=1))) < 1e-4


def test_deviation_mean_dispatch():
    assert deviation_mean(epsilon_deviation(1), [0, 1]) == 2 / 3
    assert deviation_mean(linear_deviation(), [[0, 1], [2, 3]]) == pytest.approx(1.5)
    assert deviation_mean(basic_deviation(s=identity()), [1, 3]) == pytest.approx(2.0)
