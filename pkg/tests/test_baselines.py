import itertools

import numpy as np
import pytest

from devfuse import Block
from devfuse.reducers import (
    CENTERED_OWA,
    DEFAULT_PENALTY_CANDIDATES,
    GAUSSIAN,
    GEOMETRIC_MEAN,
    MAX,
    MEAN,
    MEDIAN,
    MIN,
    AggregatorId,
    AggregatorKind,
    cowa_weights,
    gaussian_weights,
    k_alpha,
    parse_method,
    penalty,
    penalty_reduce,
    penalty_search,
    reduce_array,
    reduce_block,
    reduce_plain,
)
from devfuse.types import DomainError, PenaltyWarning, ShapeError

PLAIN = (MEAN, MEDIAN, GAUSSIAN, GEOMETRIC_MEAN, MIN, MAX, CENTERED_OWA, k_alpha(0.25))


def test_reduce_plain_examples():
    assert reduce_plain([0, 1, 1, 0], MEAN) == 0.5
    assert reduce_plain([0, 1], k_alpha(0.5)) == 0.5
    assert reduce_plain([0.3] * 4, GEOMETRIC_MEAN) == pytest.approx(0.3, rel=1e-15)
    assert reduce_plain([4, 1, 3, 2], MEDIAN) == 2
    assert reduce_plain([3, 1, 2], MEDIAN) == 2
    assert reduce_plain([1, 4, 16, 4], GEOMETRIC_MEAN) == pytest.approx(4.0)
    assert reduce_plain([0, 4, 16, 4], GEOMETRIC_MEAN) == 0.0
    assert reduce_plain([0.2, 0.9, 0.4], MIN) == 0.2
    assert reduce_plain([0.2, 0.9, 0.4], MAX) == 0.9
    # (1, 2, 2, 1) / 6 over the sorted values (0, 1, 2, 3)
    assert reduce_plain([3, 0, 2, 1], CENTERED_OWA) == pytest.approx(9 / 6)


def test_k_alpha_endpoints():
    rng = np.random.default_rng(0)
    for _ in range(50):
        x = rng.uniform(-1, 1, size=int(rng.integers(1, 10)))
        assert reduce_plain(x, k_alpha(0)) == reduce_plain(x, MIN)
        assert reduce_plain(x, k_alpha(1)) == reduce_plain(x, MAX)


def test_weight_profiles():
    assert np.allclose(cowa_weights(4), np.array([1, 2, 2, 1]) / 6)
    assert np.allclose(cowa_weights(3), np.array([1, 2, 1]) / 4)
    assert cowa_weights(1).tolist() == [1.0]

    g = gaussian_weights(3)
    assert g.shape == (9,)
    assert g.sum() == pytest.approx(1.0)
    assert g.argmax() == 4
    assert np.allclose(g.reshape(3, 3), g.reshape(3, 3).T)
    assert np.allclose(gaussian_weights(2), 0.25)


def test_reducers_are_internal():
    rng = np.random.default_rng(1)
    for _ in range(200):
        x = rng.uniform(0, 1, size=9)
        for agg in PLAIN:
            assert x.min() <= reduce_plain(x, agg) <= x.max()
        y = x - 0.5
        for agg in (k_alpha(0.5), CENTERED_OWA, MEAN, MEDIAN):
            assert y.min() <= reduce_plain(y, agg) <= y.max()


def test_reduce_plain_errors():
    with pytest.raises(DomainError, match="negative"):
        reduce_plain([0.5, -0.1], GEOMETRIC_MEAN)
    with pytest.raises(DomainError, match="At least one"):
        reduce_plain([], MEAN)
    with pytest.raises(DomainError, match="finite"):
        reduce_plain([0, np.inf], MEAN)
    with pytest.raises(ShapeError, match="square"):
        reduce_plain([0, 1, 2], GAUSSIAN)
    with pytest.raises(ValueError, match="not a plain reducer"):
        reduce_plain([0, 1], penalty())


def test_reduce_array_batches():
    x = np.random.default_rng(2).uniform(0, 1, size=(3, 5, 4))
    for agg in PLAIN:
        out = reduce_array(x, agg)
        assert out.shape == (3, 5)
        assert out[1, 2] == pytest.approx(reduce_plain(x[1, 2], agg), rel=1e-14)


def test_aggregator_ids():
    assert parse_method("mean") is MEAN
    assert parse_method(" Median ") is MEDIAN
    assert parse_method("k0.25") == k_alpha(0.25)
    assert parse_method("k0.25").name == "k0.25"
    assert parse_method("penalty").candidates == DEFAULT_PENALTY_CANDIDATES
    assert [a.name for a in DEFAULT_PENALTY_CANDIDATES] == [
        "geomean",
        "min",
        "max",
        "mean",
        "median",
    ]
    for bad in ("md", "kfoo", "average", ""):
        with pytest.raises(ValueError, match="Unknown reduction method"):
            parse_method(bad)

    with pytest.raises(DomainError, match="alpha"):
        k_alpha(1.5)
    with pytest.raises(DomainError):
        AggregatorId(AggregatorKind.K_ALPHA)
    with pytest.raises(ValueError, match="at least one candidate"):
        penalty([])
    with pytest.raises(ValueError, match="can't be penalty"):
        penalty([MEAN, penalty()])


def brute_force_penalty(block: Block, candidates):
    pixels = block.pixels()
    per_channel = [
        [reduce_plain(block.data[:, :, k], c) for k in range(block.channels)]
        for c in candidates
    ]
    best = np.inf
    for assignment in itertools.product(range(len(candidates)), repeat=block.channels):
        y = np.array([per_channel[c][k] for k, c in enumerate(assignment)])
        best = min(best, float(np.linalg.norm(pixels - y, axis=1).sum()))
    return best


def test_penalty_examples():
    block = Block(np.array([[0.0, 1.0], [1.0, 1.0]]))
    result = penalty_search(block, [MIN, MAX])
    assert result.values == (1.0,)
    assert result.penalty == 1.0
    assert result.assignment == (1,)
    assert result.evaluated == 2

    const = Block(np.full((3, 3, 3), 0.7))
    result = penalty_search(const)
    assert result.values == pytest.approx((0.7, 0.7, 0.7), rel=1e-15)
    assert result.penalty == pytest.approx(0.0, abs=1e-14)
    assert result.evaluated == 125


def test_penalty_matches_brute_force():
    rng = np.random.default_rng(3)
    for _ in range(100):
        n = int(rng.integers(1, 4))
        r = int(rng.integers(2, 4))
        k = int(rng.integers(1, 6))
        candidates = [DEFAULT_PENALTY_CANDIDATES[i] for i in rng.permutation(5)[:k]]
        block = Block(rng.uniform(0, 1, size=(r, r, n)))
        result = penalty_search(block, candidates)
        assert result.evaluated == k**n
        assert result.penalty == pytest.approx(
            brute_force_penalty(block, candidates), rel=1e-12
        )


def test_penalty_skips_failing_candidates():
    data = np.random.default_rng(4).uniform(0, 1, size=(2, 2, 2))
    data[0, 0, 1] = -0.5
    block = Block(data, origin=(3, 4))
    with pytest.warns(PenaltyWarning, match="geomean failed on channel 2"):
        result = penalty_search(block)
    assert result.evaluated == 20
    assert result.assignment[1] != 0

    with pytest.warns(PenaltyWarning):
        with pytest.raises(DomainError, match="Every penalty candidate failed") as excinfo:
            penalty_reduce(block, [GEOMETRIC_MEAN])
    assert excinfo.value.location == (3, 4)


def test_reduce_block():
    data = np.random.default_rng(5).uniform(0, 1, size=(2, 2, 3))
    block = Block(data)
    means = reduce_block(block, MEAN)
    assert means == pytest.approx(tuple(data.mean(axis=(0, 1))))
    assert reduce_block(block, penalty()) == penalty_reduce(block)
