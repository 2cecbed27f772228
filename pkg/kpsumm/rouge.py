"""
ROUGE 评估模块
==============

多参考摘要的 ROUGE-1 / ROUGE-2 召回率，以及 TSV 评估报告。

配置：小写、不做词干化、不去停用词，分词与 :func:`kpsumm.corpus.tokenize`
一致；多参考取算术平均（非最大值、非 jackknife）。

对每篇参考摘要 r::

    matched_r = Σ_g min(count_candidate(g), count_r(g))
    recall_r  = matched_r / |grams_r|

recall 为各参考 recall_r 的平均值。
"""

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import List, NamedTuple, Sequence, Tuple, Union
import csv
import io
import logging
import math

from .centrality import RankedSummary
from .corpus import Cluster, tokenize
from .errors import DomainError

logger = logging.getLogger(__name__)

#: 报告列
REPORT_COLUMNS = ("cluster_id", "strategy", "metric", "R1", "R2")

#: 均值行的 cluster_id
MEAN_ROW_ID = "MEAN"


# ==================== 打分 ====================

def extract_ngrams(tokens: Sequence[str], n: int) -> Counter:
    """连续 n 元组多重集。

    Example:
        >>> extract_ngrams(["a", "b", "c"], 2)
        Counter({('a', 'b'): 1, ('b', 'c'): 1})
    """
    if n < 1:
        raise ValueError(f"n 必须 ≥ 1，当前收到: {n!r}")
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


@dataclass(frozen=True)
class RougeScore:
    """ROUGE-N 召回率。

    Attributes:
        n: 1 或 2
        recall: 各参考召回率的平均值，位于 [0, 1]
        per_reference: 每篇参考的 (命中数, 参考 n 元组总数)
    """

    n: int
    recall: float
    per_reference: Tuple[Tuple[int, int], ...]


def rouge_n_score(candidate: str, references: Sequence[str], n: int) -> RougeScore:
    """计算 ROUGE-N 召回率。

    Args:
        candidate: 候选摘要文本
        references: 参考摘要文本
        n: n 元组长度

    Returns:
        RougeScore: 召回率

    Raises:
        DomainError: 没有任何参考摘要含有至少 n 个词元

    Example:
        >>> rouge_n_score("the cat sat", ["the cat ran"], 2).recall
        0.5
    """
    candidate_grams = extract_ngrams(tokenize(candidate), n)

    per_reference = []
    for i, reference in enumerate(references):
        reference_grams = extract_ngrams(tokenize(reference), n)
        total = sum(reference_grams.values())
        if total == 0:
            logger.warning("⚠️ 第 %d 篇参考摘要不足 %d 个词元，已忽略", i + 1, n)
            continue
        matched = sum((candidate_grams & reference_grams).values())
        per_reference.append((matched, total))

    if not per_reference:
        raise DomainError(f"没有含至少 {n} 个词元的参考摘要，无法计算 ROUGE-{n}")

    recall = math.fsum(matched / total for matched, total in per_reference) / len(per_reference)
    return RougeScore(n=n, recall=recall, per_reference=tuple(per_reference))


def evaluate_cluster(summary: RankedSummary, cluster: Cluster) -> Tuple[RougeScore, RougeScore]:
    """以簇的参考摘要评估摘要，返回 (ROUGE-1, ROUGE-2)。

    Raises:
        DomainError: 簇没有参考摘要
    """
    if not cluster.references:
        raise DomainError(
            f"簇 {cluster.id!r} 没有参考摘要，请在 refs/ 下放置至少一篇 .txt 参考摘要"
        )
    candidate = summary.text
    return (
        rouge_n_score(candidate, cluster.references, 1),
        rouge_n_score(candidate, cluster.references, 2),
    )


# ==================== 报告 ====================

class ReportRow(NamedTuple):
    """报告中的一行。"""

    cluster_id: str
    strategy: str
    metric: str
    r1: float
    r2: float


def mean_row(rows: Sequence[ReportRow], strategy: str = "", metric: str = "") -> ReportRow:
    """各行 R1 / R2 的均值行。"""
    if not rows:
        raise ValueError("至少需要一行才能计算均值")
    return ReportRow(
        cluster_id=MEAN_ROW_ID,
        strategy=strategy or rows[0].strategy,
        metric=metric or rows[0].metric,
        r1=math.fsum(r.r1 for r in rows) / len(rows),
        r2=math.fsum(r.r2 for r in rows) / len(rows),
    )


def format_report(rows: Sequence[ReportRow]) -> str:
    """格式化为 TSV：表头、数据行，以及末尾的 MEAN 行（四位小数）。"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter="\t", lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in list(rows) + [mean_row(rows)]:
        writer.writerow([row.cluster_id, row.strategy, row.metric, f"{row.r1:.4f}", f"{row.r2:.4f}"])
    return buffer.getvalue()


def read_report(path: Union[str, Path]) -> List[ReportRow]:
    """读取 :func:`format_report` 写出的 TSV（不含 MEAN 行）。"""
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f, delimiter="\t")
        return [
            ReportRow(r["cluster_id"], r["strategy"], r["metric"], float(r["R1"]), float(r["R2"]))
            for r in reader
            if r["cluster_id"] != MEAN_ROW_ID
        ]

