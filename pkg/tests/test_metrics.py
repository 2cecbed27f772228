from pathlib import Path
import math
import sys

import numpy as np
import pytest


REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from kpsumm.errors import DomainError
from kpsumm.metrics import (
    CHEBYSHEV,
    COSINE,
    EUCLIDEAN,
    FRAC133,
    JENSEN_SHANNON,
    MANHATTAN,
    MINKOWSKI,
    MetricId,
    distance,
    pairwise_distances,
    parse_metric,
    similarity,
)

TOLERANCE = 1e-9
SAMPLES = 10_000
DIM = 8

ALL_METRICS = [
    MetricId(COSINE),
    MetricId(EUCLIDEAN),
    MetricId(MANHATTAN),
    MetricId(CHEBYSHEV),
    MetricId(FRAC133),
    MetricId(MINKOWSKI, 3.0),
    MetricId(JENSEN_SHANNON),
]

P_NORM_METRICS = [
    MetricId(EUCLIDEAN),
    MetricId(MANHATTAN),
    MetricId(CHEBYSHEV),
    MetricId(FRAC133),
    MetricId(MINKOWSKI, 3.0),
]


def _vectors(seed, n=SAMPLES):
    rng = np.random.default_rng(seed)
    values = rng.random((n, DIM))
    mask = rng.random((n, DIM)) < 0.7
    values = values * mask
    # JS 需要正的 L1 质量
    values[:, 0] += 0.01
    return values


def _rowwise(metric, a, b, chunk=100):
    """distance(a[i], b[i])，分块避免构造 n × n 矩阵。"""
    return np.concatenate([
        np.diag(pairwise_distances(metric, a[i:i + chunk], b[i:i + chunk]))
        for i in range(0, len(a), chunk)
    ])


@pytest.mark.parametrize("metric", ALL_METRICS, ids=str)
def test_distances_are_symmetric_non_negative_and_zero_on_identity(metric):
    x, y = _vectors(1), _vectors(2)

    forward = _rowwise(metric, x, y)
    backward = _rowwise(metric, y, x)

    np.testing.assert_allclose(forward, backward, rtol=0, atol=TOLERANCE)
    assert (forward >= 0).all()
    assert np.abs(_rowwise(metric, x, x)).max() <= TOLERANCE


@pytest.mark.parametrize("metric", P_NORM_METRICS, ids=str)
def test_p_norm_distances_satisfy_triangle_inequality(metric):
    x, y, z = _vectors(3), _vectors(4), _vectors(5)

    direct = _rowwise(metric, x, z)
    detour = _rowwise(metric, x, y) + _rowwise(metric, y, z)

    assert (direct <= detour + TOLERANCE).all()


def test_p_norms_are_monotone_in_the_exponent():
    x, y = _vectors(6), _vectors(7)

    manhattan = _rowwise(MetricId(MANHATTAN), x, y)
    frac133 = _rowwise(MetricId(FRAC133), x, y)
    euclidean = _rowwise(MetricId(EUCLIDEAN), x, y)
    chebyshev = _rowwise(MetricId(CHEBYSHEV), x, y)

    assert (manhattan + TOLERANCE >= frac133).all()
    assert (frac133 + TOLERANCE >= euclidean).all()
    assert (euclidean + TOLERANCE >= chebyshev).all()


def test_jensen_shannon_is_bounded_by_ln_2():
    x, y = _vectors(8), _vectors(9)

    js = _rowwise(MetricId(JENSEN_SHANNON), x, y)

    assert (js >= -TOLERANCE).all()
    assert (js <= math.log(2) + TOLERANCE).all()
    assert distance(MetricId(JENSEN_SHANNON), [1, 0], [0, 1]) == pytest.approx(math.log(2))


def test_jensen_shannon_matches_natural_log_definition():
    rng = np.random.default_rng(10)
    for _ in range(100):
        u, v = rng.random(5) + 0.01, rng.random(5) + 0.01
        p, q = u / u.sum(), v / v.sum()
        m = (p + q) / 2
        expected = 0.5 * np.sum(p * np.log(p / m)) + 0.5 * np.sum(q * np.log(q / m))

        assert distance(MetricId(JENSEN_SHANNON), u, v) == pytest.approx(expected, abs=TOLERANCE)


def test_jensen_shannon_rejects_zero_mass_vectors():
    with pytest.raises(DomainError):
        distance(MetricId(JENSEN_SHANNON), [0, 0], [1, 2])


def test_cosine_is_scale_invariant():
    x, y = _vectors(11), _vectors(12)

    np.testing.assert_allclose(
        _rowwise(MetricId(COSINE), x, y),
        _rowwise(MetricId(COSINE), 3.7 * x, y),
        rtol=0,
        atol=TOLERANCE,
    )


def test_cosine_of_zero_vector_is_zero_similarity():
    assert distance(MetricId(COSINE), [0, 0], [1, 2]) == 1.0
    assert similarity(MetricId(COSINE), [0, 0], [0, 0]) == 0.0
    assert similarity(MetricId(COSINE), [1, 1], [2, 2]) == pytest.approx(1.0)


def test_scalar_helpers():
    assert distance(MetricId(MANHATTAN), [0, 0], [1, 2]) == 3.0
    assert similarity(MetricId(EUCLIDEAN), [0, 0], [3, 4]) == -5.0
    assert distance(MetricId(CHEBYSHEV), [0, 0], [1, -2]) == 2.0
    assert distance(MetricId(FRAC133), [1, 1], [0, 0]) == pytest.approx(2 ** 0.75)
    assert distance(MetricId(MINKOWSKI, 2.0), [0, 0], [3, 4]) == pytest.approx(5.0)


def test_metric_id_validation():
    with pytest.raises(ValueError, match="未知"):
        MetricId("hamming")
    with pytest.raises(ValueError):
        MetricId(MINKOWSKI)
    with pytest.raises(ValueError):
        MetricId(MINKOWSKI, -1.0)
    with pytest.raises(ValueError):
        MetricId(COSINE, 2.0)


def test_parse_metric_accepts_cli_names():
    assert parse_metric("cosine") == MetricId(COSINE)
    assert parse_metric("FRAC133") == MetricId(FRAC133)
    assert parse_metric("js") == MetricId(JENSEN_SHANNON)
    assert parse_metric("jensen_shannon") == MetricId(JENSEN_SHANNON)
    assert parse_metric("minkowski") == MetricId(MINKOWSKI, 3.0)
    assert parse_metric("minkowski:2.5") == MetricId(MINKOWSKI, 2.5)
    assert str(parse_metric("minkowski:2.5")) == "minkowski:2.5"
    assert str(parse_metric("jsd")) == "js"

    with pytest.raises(ValueError):
        parse_metric("cosine:2")
    with pytest.raises(ValueError):
        parse_metric("minkowski:abc")
    with pytest.raises(ValueError):
        parse_metric("")


def test_exponents_of_the_minkowski_family():
    assert MetricId(FRAC133).exponent == pytest.approx(4 / 3)
    assert MetricId(EUCLIDEAN).exponent == 2.0
    assert MetricId(MANHATTAN).exponent == 1.0
    assert MetricId(COSINE).exponent is None
