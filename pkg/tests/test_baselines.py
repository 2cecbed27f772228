from pathlib import Path
import sys

import numpy as np
import pytest


REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from kpsumm.baselines import (
    MMRConfig,
    centroid_rank,
    centroid_ranking,
    centroid_summarize,
    mmr_rank,
    mmr_ranking,
    mmr_summarize,
)
from kpsumm.corpus import Cluster, make_document, make_passage
from kpsumm.errors import DomainError
from kpsumm.metrics import COSINE, MetricId, pairwise_similarities
from kpsumm.multidoc import StrategyConfig
from kpsumm.vectorspace import ColumnKind, KPMatrix, Vocabulary

COS = MetricId(COSINE)


def _matrix(passages):
    passages = np.asarray(passages, dtype=float)
    width = passages.shape[1]
    terms = tuple(f"t{i}" for i in range(width))
    vocab = Vocabulary(
        terms=terms,
        term_index={t: i for i, t in enumerate(terms)},
        document_frequency={t: 1 for t in terms},
    )
    return KPMatrix(vocab, passages, np.zeros((0, width)), (ColumnKind.PASSAGE,) * len(passages))


def _instance(rng, max_n=10):
    n = int(rng.integers(1, max_n + 1))
    width = int(rng.integers(2, 12))
    columns = rng.random((n, width)) * (rng.random((n, width)) < 0.7)
    columns[:, 0] += 0.05
    return _matrix(columns), rng.random(width) + 0.01


def _mmr_oracle(matrix, query, lam):
    """逐步按 MMR 定义重新求值。"""
    columns = matrix.passage_columns
    relevance = pairwise_similarities(COS, columns, query[None, :])[:, 0]
    redundancy = pairwise_similarities(COS, columns, columns)
    selected = []
    remaining = list(range(matrix.n_passages))
    while remaining:
        def score(i):
            penalty = max(redundancy[i][j] for j in selected) if selected else 0.0
            return lam * relevance[i] - (1 - lam) * penalty

        best = max(remaining, key=lambda i: (score(i), -i))
        selected.append(best)
        remaining.remove(best)
    return tuple(selected)


# ==================== MMR ====================

def test_mmr_with_lambda_one_is_a_relevance_sort():
    rng = np.random.default_rng(21)
    for _ in range(200):
        matrix, query = _instance(rng)
        relevance = pairwise_similarities(COS, matrix.passage_columns, query[None, :])[:, 0]

        ranking = mmr_ranking(query, MMRConfig(mmr_lambda=1.0), matrix)

        assert ranking.order == tuple(sorted(range(matrix.n_passages), key=lambda i: (-relevance[i], i)))


@pytest.mark.parametrize("lam", [0.0, 0.3, 0.5, 1.0])
def test_mmr_matches_step_by_step_oracle(lam):
    rng = np.random.default_rng(22)
    for _ in range(200):
        matrix, query = _instance(rng, max_n=6)

        ranking = mmr_ranking(query, MMRConfig(mmr_lambda=lam), matrix)

        assert ranking.order == _mmr_oracle(matrix, query, lam)
        assert sorted(ranking.order) == list(range(matrix.n_passages))


def test_mmr_with_lambda_zero_starts_with_first_passage():
    rng = np.random.default_rng(23)
    for _ in range(50):
        matrix, query = _instance(rng)

        assert mmr_ranking(query, MMRConfig(mmr_lambda=0.0), matrix).order[0] == 0


def test_mmr_penalizes_redundant_passages():
    matrix = _matrix([[1.0, 0.0], [1.0, 0.0], [0.6, 0.8]])
    query = np.array([1.0, 0.2])

    assert mmr_ranking(query, MMRConfig(mmr_lambda=1.0), matrix).order == (0, 1, 2)
    assert mmr_ranking(query, MMRConfig(mmr_lambda=0.5), matrix).order == (0, 2, 1)


def test_mmr_rank_returns_passages():
    matrix = _matrix([[0.0, 1.0], [1.0, 0.0]])
    passages = [make_passage("d", 0, "left"), make_passage("d", 1, "right")]

    ranked = mmr_rank(passages, [1.0, 0.0], MMRConfig(), matrix)

    assert [p.key for p in ranked] == [("d", 1), ("d", 0)]


def test_mmr_rejects_zero_query_and_bad_lambda():
    matrix = _matrix([[1.0, 0.0]])

    with pytest.raises(DomainError):
        mmr_ranking(np.zeros(2), MMRConfig(), matrix)
    with pytest.raises(ValueError):
        MMRConfig(mmr_lambda=1.5)
    with pytest.raises(ValueError):
        MMRConfig(mmr_lambda=-0.1)


# ==================== 质心 ====================

def test_centroid_ties_keep_document_order():
    matrix = _matrix([[1.0, 2.0]] * 4)

    assert centroid_ranking(matrix).order == (0, 1, 2, 3)


def test_centroid_prefers_the_passage_closest_to_the_mean():
    matrix = _matrix([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    passages = [make_passage("d", i, f"p{i}") for i in range(3)]

    assert centroid_ranking(matrix).order == (2, 0, 1)
    assert [p.index for p in centroid_rank(passages, matrix)] == [2, 0, 1]


def test_centroid_matches_brute_force():
    rng = np.random.default_rng(24)
    for _ in range(100):
        matrix, _ = _instance(rng)
        columns = matrix.passage_columns
        centroid = columns.mean(axis=0)
        sims = columns @ centroid / (np.linalg.norm(columns, axis=1) * np.linalg.norm(centroid))

        order = centroid_ranking(matrix).order

        for earlier, later in zip(order, order[1:]):
            assert sims[earlier] >= sims[later] - 1e-12


# ==================== 簇级入口 ====================

def _cluster(query=None):
    docs = (
        make_document("d1", "The senate passed the budget. The house debated the veto.", order_key=0),
        make_document("d2", "The budget veto was overturned. Storms hit the city.", order_key=1),
    )
    return Cluster("c", docs, query=query)


def test_mmr_summarize_needs_a_query():
    cfg = StrategyConfig(strategy="mmr", budget_words=10)

    with pytest.raises(DomainError, match="query"):
        mmr_summarize(_cluster(), cfg)
    with pytest.raises(DomainError):
        mmr_summarize(_cluster(query="zebra giraffe"), cfg)


def test_mmr_summarize_fills_budget_from_concatenated_documents():
    summary = mmr_summarize(_cluster(query="budget veto"), StrategyConfig(strategy="mmr", budget_words=12))

    assert 0 < summary.total_words <= 12
    assert summary.keys[0][0] in {"d1", "d2"}


def test_centroid_summarize_respects_budget():
    summary = centroid_summarize(_cluster(), StrategyConfig(strategy="centroid", budget_words=9))

    assert 0 < summary.total_words <= 9
    everything = centroid_summarize(_cluster(), StrategyConfig(strategy="centroid", budget_words=100))
    assert everything.keys == [p.key for p in _cluster().passages]
