"""
KP-Centrality 核心
==================

为每个段落与人工段落计算支持集，按“被多少支持集包含”对真实段落排序，
并在字数预算内抽取摘要。

支持集::

    S_i = { s ∈ I ∪ K : sim(s, q_i) > ε_i  且  s ≠ q_i },  i = 0 .. N+M-1

阈值 ε_i 采用段落顺序启发式的二分划分：取拥有者到其余真实段落（按出现顺序）
距离的算术平均值，距离小于平均值的候选属于“较近”子集，即支持集成员。
参与平均的真实段落距离少于 2 个时 ε_i = -∞，支持集为其余全部列。

排序::

    score(s) = |{ S_i : s ∈ S_i }|，只对真实段落计分（人工段落不可抽取），
    按 (score 降序, 原文顺序升序) 排列。
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from .corpus import Passage
from .metrics import MetricId, distance_to_similarity, pairwise_distances
from .vectorspace import KPMatrix

logger = logging.getLogger(__name__)

# 浮点平均值附近的模糊区间，区间内改用精确有理数比较
_TIE_TOLERANCE = 1e-9


# ==================== 数据类型 ====================

@dataclass(frozen=True)
class SupportSet:
    """支持集。

    Attributes:
        owner: 拥有者列序号（0 起）
        members: 满足 sim(s, owner) > epsilon 且 s ≠ owner 的列序号
        epsilon: 相似度阈值 ε（cosine 为余弦值，其余为负距离）
    """

    owner: int
    members: FrozenSet[int]
    epsilon: float

    def __contains__(self, column: int) -> bool:
        return column in self.members

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class PassageRanking:
    """真实段落排序。

    Attributes:
        order: 真实段落序号，按排名先后
        scores: 段落序号 → 排序分数
    """

    order: Tuple[int, ...]
    scores: Dict[int, float]


@dataclass(frozen=True)
class CentralityRanking(PassageRanking):
    """KP-Centrality 排序，分数为包含该段落的支持集数量。"""

    support_sets: Tuple[SupportSet, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class RankedSummary:
    """预算内的抽取式摘要。

    Attributes:
        passages: 按原文顺序排列的入选段落
        total_words: 入选段落词数之和（≤ budget_words）
        budget_words: 字数预算
        scores: 与 passages 平行的排序分数
    """

    passages: Tuple[Passage, ...]
    total_words: int
    budget_words: int
    scores: Tuple[float, ...] = ()

    @property
    def keys(self) -> List[Tuple[str, int]]:
        """入选段落身份 ``(doc_id, index)``。"""
        return [p.key for p in self.passages]

    @property
    def text(self) -> str:
        """每行一个段落的摘要文本。"""
        return "\n".join(p.text for p in self.passages)

    def __len__(self) -> int:
        return len(self.passages)


# ==================== 支持集 ====================

def _reference_columns(owner: int, matrix: KPMatrix) -> List[int]:
    """参与阈值计算的真实段落列（按出现顺序，不含拥有者）。"""
    return [k for k in range(matrix.n_passages) if k != owner]


def _members(row: np.ndarray, reference: Sequence[int], candidates: Sequence[int]) -> Tuple[List[int], float]:
    """返回距离严格小于参考距离平均值的候选，以及该平均值（浮点）。"""
    count = len(reference)
    mean = math.fsum(row[reference]) / count
    tolerance = _TIE_TOLERANCE * max(1.0, abs(mean))

    exact_total: Optional[Fraction] = None
    members = []
    for column in candidates:
        d = float(row[column])
        if d < mean - tolerance:
            members.append(column)
        elif d <= mean + tolerance:
            if exact_total is None:
                exact_total = sum((Fraction(float(x)) for x in row[reference]), Fraction(0))
            if Fraction(d) * count < exact_total:
                members.append(column)
    return members, mean


def compute_epsilon(owner: int, matrix: KPMatrix, metric: MetricId) -> float:
    """计算列 owner 的相似度阈值 ε。

    Args:
        owner: 拥有者列序号
        matrix: KP 矩阵
        metric: 距离度量

    Returns:
        float: 距离度量为 ``-平均距离``，cosine 为 ``1 - 平均余弦距离``；
        参考距离少于 2 个时为 ``-inf``
    """
    reference = _reference_columns(owner, matrix)
    if len(reference) < 2:
        return -math.inf
    row = pairwise_distances(metric, matrix.columns[owner], matrix.columns)[0]
    _, mean = _members(row, reference, [])
    return distance_to_similarity(metric, mean)


def compute_support_sets(matrix: KPMatrix, metric: MetricId) -> Tuple[SupportSet, ...]:
    """为全部 N + M 列计算支持集。

    候选池为全部列（真实段落、关键短语与查询），不含拥有者本身；
    阈值只由真实段落距离决定，比较为严格不等式。
    """
    columns = matrix.columns
    distances = pairwise_distances(metric, columns, columns)
    everything = range(matrix.n_columns)

    support_sets = []
    for owner in everything:
        candidates = [s for s in everything if s != owner]
        reference = _reference_columns(owner, matrix)
        if len(reference) < 2:
            support_sets.append(SupportSet(owner, frozenset(candidates), -math.inf))
            continue
        members, mean = _members(distances[owner], reference, candidates)
        support_sets.append(
            SupportSet(owner, frozenset(members), distance_to_similarity(metric, mean))
        )

    logger.debug(
        "支持集: %d 列, 平均大小 %.2f",
        len(support_sets),
        sum(len(s) for s in support_sets) / max(len(support_sets), 1),
    )
    return tuple(support_sets)


# ==================== 排序与抽取 ====================

def rank_passages(support_sets: Sequence[SupportSet], matrix: KPMatrix) -> CentralityRanking:
    """按包含次数对真实段落排序，人工段落不参与排名。

    Raises:
        ValueError: 支持集数量与矩阵列数不一致
    """
    if len(support_sets) != matrix.n_columns:
        raise ValueError(
            f"支持集数量 {len(support_sets)} 与矩阵列数 {matrix.n_columns} 不一致"
        )
    n = matrix.n_passages
    counts = {s: 0 for s in range(n)}
    for support_set in support_sets:
        for member in support_set.members:
            if member < n:
                counts[member] += 1
    order = tuple(sorted(range(n), key=lambda s: (-counts[s], s)))
    return CentralityRanking(order=order, scores=counts, support_sets=tuple(support_sets))


def centrality_ranking(matrix: KPMatrix, metric: MetricId) -> CentralityRanking:
    """计算支持集并排序。"""
    return rank_passages(compute_support_sets(matrix, metric), matrix)


def extract_summary(ranking: PassageRanking, passages: Sequence[Passage], budget_words: int) -> RankedSummary:
    """按排名贪心填充字数预算。

    依次检查排名中的段落：放得下就选入，放不下就跳过继续（不截断）；
    输出按原文顺序重排。

    Args:
        ranking: 段落排序
        passages: 与排序序号对应的段落
        budget_words: 字数预算（≥ 1）

    Returns:
        RankedSummary: 摘要；所有段落都超过预算时为空摘要（记录警告）
    """
    if budget_words < 1:
        raise ValueError(f"budget_words 必须 ≥ 1，当前收到: {budget_words!r}")

    remaining = budget_words
    chosen = []
    for ordinal in ranking.order:
        if remaining <= 0:
            break
        words = passages[ordinal].word_count
        if words <= remaining:
            chosen.append(ordinal)
            remaining -= words
    chosen.sort()

    if passages and not chosen:
        logger.warning("⚠️ 预算 %d 词小于所有段落，得到空摘要", budget_words)

    return RankedSummary(
        passages=tuple(passages[i] for i in chosen),
        total_words=budget_words - remaining,
        budget_words=budget_words,
        scores=tuple(float(ranking.scores.get(i, 0)) for i in chosen),
    )
