from pathlib import Path
from fractions import Fraction
import math
import sys

import numpy as np
import pytest


REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from kpsumm.centrality import (
    PassageRanking,
    centrality_ranking,
    compute_epsilon,
    compute_support_sets,
    extract_summary,
    rank_passages,
)
from kpsumm.corpus import make_passage
from kpsumm.metrics import (
    CHEBYSHEV,
    COSINE,
    EUCLIDEAN,
    FRAC133,
    JENSEN_SHANNON,
    MANHATTAN,
    MetricId,
    similarity,
)
from kpsumm.vectorspace import ColumnKind, KPMatrix, Vocabulary

ORACLE_METRICS = [COSINE, FRAC133, EUCLIDEAN, MANHATTAN, CHEBYSHEV, JENSEN_SHANNON]
ORACLE_INSTANCES = 1000


def _matrix(passages, artificial=()):
    passages = np.asarray(passages, dtype=float)
    width = passages.shape[1]
    artificial = np.asarray(artificial, dtype=float).reshape(-1, width)
    terms = tuple(f"t{i}" for i in range(width))
    vocab = Vocabulary(
        terms=terms,
        term_index={t: i for i, t in enumerate(terms)},
        document_frequency={t: 1 for t in terms},
    )
    labels = (ColumnKind.PASSAGE,) * len(passages) + (ColumnKind.KEYPHRASE,) * len(artificial)
    return KPMatrix(vocab, passages, artificial, labels)


def _random_instance(rng, dense=False):
    n = int(rng.integers(1, 11))
    m = int(rng.integers(0, 5))
    width = int(rng.integers(2, 31))
    columns = rng.random((n + m, width))
    if dense:
        columns += 0.01
    else:
        columns *= rng.random((n + m, width)) < 0.6
        for row in columns:
            if not row.any():
                row[rng.integers(width)] = rng.random() + 0.1
    return _matrix(columns[:n], columns[n:])


def _oracle_distances(name, columns):
    """直接按定义计算的全列距离矩阵。"""
    diff = columns[:, None, :] - columns[None, :, :]
    if name == MANHATTAN:
        return np.abs(diff).sum(axis=-1)
    if name == EUCLIDEAN:
        return np.sqrt((diff ** 2).sum(axis=-1))
    if name == CHEBYSHEV:
        return np.abs(diff).max(axis=-1)
    if name == FRAC133:
        return (np.abs(diff) ** (4 / 3)).sum(axis=-1) ** 0.75
    if name == COSINE:
        norms = np.linalg.norm(columns, axis=1)
        return 1.0 - (columns @ columns.T) / np.outer(norms, norms)
    if name == JENSEN_SHANNON:
        p = columns / columns.sum(axis=1, keepdims=True)
        m = (p[:, None, :] + p[None, :, :]) / 2
        left = (p[:, None, :] * np.log(p[:, None, :] / m)).sum(axis=-1)
        right = (p[None, :, :] * np.log(p[None, :, :] / m)).sum(axis=-1)
        return (left + right) / 2
    raise AssertionError(name)


def _oracle(name, matrix):
    """逐条按支持集定义与计数定义重新求值。"""
    n, total = matrix.n_passages, matrix.n_columns
    d = _oracle_distances(name, matrix.columns)
    support = []
    for i in range(total):
        reference = [k for k in range(n) if k != i]
        if len(reference) < 2:
            members = {s for s in range(total) if s != i}
        else:
            # d < 平均值  ⇔  d · |reference| < Σ d_k，以有理数精确比较
            total_distance = sum(Fraction(float(d[i][k])) for k in reference)
            members = {
                s for s in range(total)
                if s != i and Fraction(float(d[i][s])) * len(reference) < total_distance
            }
        support.append(members)
    counts = {s: sum(s in members for members in support) for s in range(n)}
    order = sorted(range(n), key=lambda s: (-counts[s], s))
    return support, counts, order


@pytest.mark.parametrize("name", ORACLE_METRICS)
def test_support_sets_and_ranking_match_brute_force_oracle(name):
    rng = np.random.default_rng(2024)
    metric = MetricId(name)
    for _ in range(ORACLE_INSTANCES):
        matrix = _random_instance(rng, dense=(name == JENSEN_SHANNON))

        ranking = centrality_ranking(matrix, metric)
        support, counts, order = _oracle(name, matrix)

        assert [set(s.members) for s in ranking.support_sets] == support
        assert ranking.scores == counts
        assert list(ranking.order) == order


@pytest.mark.parametrize("name", [MANHATTAN, EUCLIDEAN, CHEBYSHEV, FRAC133, COSINE])
def test_ranking_is_invariant_under_uniform_scaling(name):
    rng = np.random.default_rng(7)
    metric = MetricId(name)
    for _ in range(200):
        matrix = _random_instance(rng)
        scaled = _matrix(4.0 * matrix.passage_columns, 4.0 * matrix.artificial_columns)

        original = centrality_ranking(matrix, metric)
        rescaled = centrality_ranking(scaled, metric)

        assert [s.members for s in original.support_sets] == [s.members for s in rescaled.support_sets]
        assert original.order == rescaled.order


def test_members_are_strictly_above_epsilon_and_exclude_owner():
    rng = np.random.default_rng(3)
    metric = MetricId(EUCLIDEAN)
    for _ in range(100):
        matrix = _random_instance(rng)
        columns = matrix.columns
        for support_set in compute_support_sets(matrix, metric):
            assert support_set.owner not in support_set
            for member in support_set.members:
                assert similarity(metric, columns[member], columns[support_set.owner]) > support_set.epsilon


def test_epsilon_splits_at_mean_distance():
    matrix = _matrix([[5.0, 0.0], [6.0, 0.0], [8.0, 0.0]])

    assert compute_epsilon(0, matrix, MetricId(MANHATTAN)) == pytest.approx(-2.0)
    assert compute_support_sets(matrix, MetricId(MANHATTAN))[0].members == {1}


def test_equidistant_candidates_give_empty_support_set():
    matrix = _matrix([[1, 1, 1], [2, 1, 1], [1, 2, 1], [1, 1, 2]])

    support_sets = compute_support_sets(matrix, MetricId(CHEBYSHEV))

    assert support_sets[0].members == frozenset()
    assert support_sets[0].epsilon == -1.0


def test_equidistant_cosine_candidates_give_empty_support_set():
    matrix = _matrix([[1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0]])

    assert compute_support_sets(matrix, MetricId(COSINE))[0].members == frozenset()


def test_two_passages_always_support_each_other():
    matrix = _matrix([[1.0, 0.0], [0.0, 1.0]])

    support_sets = compute_support_sets(matrix, MetricId(MANHATTAN))

    assert [s.members for s in support_sets] == [{1}, {0}]
    assert all(math.isinf(s.epsilon) for s in support_sets)


def test_keyphrase_identical_to_passage_joins_its_support_set():
    matrix = _matrix([[3.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]], [[3.0, 0.0, 0.0]])

    support_sets = compute_support_sets(matrix, MetricId(EUCLIDEAN))

    assert 3 in support_sets[0]


def test_ranking_counts_votes_from_artificial_owners_but_never_ranks_them():
    rng = np.random.default_rng(5)
    for _ in range(50):
        matrix = _random_instance(rng)
        ranking = centrality_ranking(matrix, MetricId(COSINE))

        assert sorted(ranking.order) == list(range(matrix.n_passages))
        for s in range(matrix.n_passages):
            assert ranking.scores[s] == sum(s in support for support in ranking.support_sets)


def test_rank_passages_checks_support_set_count():
    matrix = _matrix([[1.0, 0.0], [0.0, 1.0]])
    support_sets = compute_support_sets(matrix, MetricId(MANHATTAN))

    with pytest.raises(ValueError):
        rank_passages(support_sets[:1], matrix)


def _word_passages(*word_counts):
    return [make_passage("d", i, " ".join(["w"] * n)) for i, n in enumerate(word_counts)]


def test_extract_summary_fills_budget_greedily_in_rank_order():
    passages = _word_passages(10, 10, 10, 10)

    summary = extract_summary(PassageRanking(order=(2, 0, 1, 3), scores={}), passages, 25)

    assert summary.keys == [("d", 0), ("d", 2)]
    assert summary.total_words == 20
    assert summary.budget_words == 25


def test_extract_summary_skips_passages_that_do_not_fit():
    passages = _word_passages(30, 10)

    summary = extract_summary(PassageRanking(order=(0, 1), scores={0: 5, 1: 3}), passages, 20)

    assert summary.keys == [("d", 1)]
    assert summary.scores == (3.0,)


def test_extract_summary_saturates_when_everything_fits():
    passages = _word_passages(3, 4, 5)

    summary = extract_summary(PassageRanking(order=(1, 2, 0), scores={}), passages, 12)

    assert summary.keys == [("d", 0), ("d", 1), ("d", 2)]
    assert summary.text == "\n".join(p.text for p in passages)


def test_extract_summary_with_tiny_budget_is_empty(caplog):
    summary = extract_summary(PassageRanking(order=(0,), scores={}), _word_passages(5), 2)

    assert len(summary) == 0
    assert summary.total_words == 0
    assert "空摘要" in caplog.text
    with pytest.raises(ValueError):
        extract_summary(PassageRanking(order=(0,), scores={}), _word_passages(5), 0)
