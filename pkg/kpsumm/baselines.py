"""
基线排序模块
============

对照用的两种排序器，与 KP-Centrality 共享预算填充抽取：

- MMR：查询驱动的最大边际相关性贪心排序::

      argmax_{S_i} [ λ·Sim1(S_i, Q) − (1 − λ)·max_{S_j} Sim2(S_i, S_j) ]

  S_i 为未选段落，S_j 为已选段落，已选集合为空时 max 取 0。
- 质心：按与真实段落 TF-IDF 平均向量的余弦相似度排序。这是一个极简的
  类 MEAD 替身，并非 MEAD 本身（没有位置、长度等特征）。
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Sequence
import logging

import numpy as np

from .centrality import PassageRanking, RankedSummary, extract_summary
from .constants import DEFAULT_MMR_LAMBDA
from .corpus import Cluster, Passage, concat_documents
from .errors import DomainError
from .metrics import COSINE, MetricId, pairwise_similarities
from .vectorspace import KPMatrix, build_kp_matrix, build_vocabulary

if TYPE_CHECKING:
    from .multidoc import StrategyConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MMRConfig:
    """MMR 参数。

    Attributes:
        mmr_lambda: λ ∈ [0, 1]，1 为纯相关性排序，0 为最大多样性
        sim1: 段落与查询的相似度
        sim2: 段落之间的相似度
    """

    mmr_lambda: float = DEFAULT_MMR_LAMBDA
    sim1: MetricId = MetricId(COSINE)
    sim2: MetricId = MetricId(COSINE)

    def __post_init__(self):
        if not 0.0 <= self.mmr_lambda <= 1.0:
            raise ValueError(f"mmr_lambda 必须在 [0, 1] 之间，当前收到: {self.mmr_lambda!r}")


# ==================== MMR ====================

def mmr_ranking(query_vector, cfg: MMRConfig, matrix: KPMatrix) -> PassageRanking:
    """MMR 贪心排序，返回全部真实段落的顺序及各自入选时的 MMR 分数。

    Raises:
        DomainError: 查询向量为零
    """
    query = np.asarray(query_vector, dtype=float)
    if not query.any():
        raise DomainError("MMR 是查询驱动的模型，查询向量不能为零；请改用 centrality 策略")

    n = matrix.n_passages
    relevance = pairwise_similarities(cfg.sim1, matrix.passage_columns, query[None, :])[:, 0]
    redundancy = pairwise_similarities(cfg.sim2, matrix.passage_columns, matrix.passage_columns)
    lam = cfg.mmr_lambda

    remaining = list(range(n))
    max_redundancy = np.full(n, -np.inf)
    order: List[int] = []
    scores = {}
    while remaining:
        best, best_score = None, -np.inf
        for i in remaining:
            penalty = max_redundancy[i] if order else 0.0
            score = lam * relevance[i] - (1.0 - lam) * penalty
            if best is None or score > best_score:
                best, best_score = i, score
        order.append(best)
        scores[best] = float(best_score)
        remaining.remove(best)
        max_redundancy = np.maximum(max_redundancy, redundancy[:, best])

    logger.debug("MMR 排序完成: %d 个段落, λ=%.2f", n, lam)
    return PassageRanking(order=tuple(order), scores=scores)


def mmr_rank(
    passages: Sequence[Passage],
    query_vector,
    cfg: MMRConfig,
    matrix: KPMatrix,
) -> List[Passage]:
    """MMR 排序，返回全部段落的一个排列。同分按原文顺序。"""
    ranking = mmr_ranking(query_vector, cfg, matrix)
    return [passages[i] for i in ranking.order]


# ==================== 质心 ====================

def centroid_ranking(matrix: KPMatrix) -> PassageRanking:
    """按与质心的余弦相似度降序排列，同分按原文顺序。"""
    centroid = matrix.passage_columns.mean(axis=0)
    sims = pairwise_similarities(MetricId(COSINE), matrix.passage_columns, centroid[None, :])[:, 0]
    order = sorted(range(matrix.n_passages), key=lambda i: (-sims[i], i))
    return PassageRanking(order=tuple(order), scores={i: float(sims[i]) for i in order})


def centroid_rank(passages: Sequence[Passage], matrix: KPMatrix) -> List[Passage]:
    """质心排序，返回全部段落的一个排列。"""
    return [passages[i] for i in centroid_ranking(matrix).order]


# ==================== 簇级入口 ====================

def _concatenated(cluster: Cluster):
    return concat_documents(f"{cluster.id}:concat", cluster.documents)


def mmr_summarize(cluster: Cluster, cfg: "StrategyConfig") -> RankedSummary:
    """在按时间拼接的伪文档上做 MMR 排序并按预算抽取。

    Raises:
        DomainError: 簇没有查询，或查询的词元全不在词表中
    """
    if not cluster.query:
        raise DomainError(
            f"MMR 需要查询，但簇 {cluster.id!r} 缺少 query.txt；请改用 centrality 策略"
        )
    doc = _concatenated(cluster)
    vocab = build_vocabulary(doc.passages)
    matrix = build_kp_matrix(doc.passages, [], cluster.query, vocab)
    query_vector = matrix.query_column
    if query_vector is None:
        query_vector = np.zeros(len(vocab))
    ranking = mmr_ranking(query_vector, cfg.mmr_config, matrix)
    return extract_summary(ranking, doc.passages, cfg.budget_words)


def centroid_summarize(cluster: Cluster, cfg: "StrategyConfig") -> RankedSummary:
    """在按时间拼接的伪文档上做质心排序并按预算抽取。"""
    doc = _concatenated(cluster)
    vocab = build_vocabulary(doc.passages)
    matrix = build_kp_matrix(doc.passages, [], None, vocab)
    return extract_summary(centroid_ranking(matrix), doc.passages, cfg.budget_words)
