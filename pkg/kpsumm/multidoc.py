"""
多文档组合模块
==============

把单文档的 KP-Centrality 摘要组合为多文档摘要：

- single_layer：每篇文档先生成与输出同等字数的中间摘要，按时间顺序拼接为
  一篇新文档，再摘要一次。
- waterfall：先合并最早两篇文档的中间摘要并摘要，结果再与下一篇的中间摘要
  合并摘要，直到最新一篇。
- concat_baseline：所有文档按时间顺序拼接后做一次单文档摘要。

关键短语在每个簇上只对原始文档抽取与融合一次，之后每一层只按当前输入过滤，
不重新抽取。中间摘要中的段落保留来源身份 ``(doc_id, index)``。

Example:
    .. code-block:: python

        from kpsumm.corpus import load_cluster
        from kpsumm.metrics import parse_metric
        from kpsumm.multidoc import StrategyConfig, waterfall_summarize

        cluster = load_cluster("data/D0730G")
        cfg = StrategyConfig(strategy="waterfall", metric=parse_metric("cosine"))
        summary = waterfall_summarize(cluster, cfg)
        print(summary.text)
"""

from dataclasses import dataclass
from typing import FrozenSet, List, NamedTuple, Optional, Tuple
import logging

import numpy as np

from .baselines import MMRConfig, centroid_summarize, mmr_summarize
from .centrality import RankedSummary, centrality_ranking, extract_summary
from .constants import (
    CENTROID,
    CONCAT_BASELINE,
    DEFAULT_BUDGET_WORDS,
    DEFAULT_KEYPHRASES,
    DEFAULT_MMR_LAMBDA,
    DEFAULT_PER_DOC_KEYPHRASES,
    DEFAULT_STRATEGY,
    MMR,
    SINGLE_LAYER,
    STRATEGIES,
    STRATEGY_ALIASES,
    WATERFALL,
)
from .corpus import Cluster, Document, concat_documents, passages_as_document
from .errors import InputError
from .keyphrase import KeyphraseSet, extract_cluster_keyphrases, filter_keyphrases_for_text
from .metrics import COSINE, MetricId
from .vectorspace import build_kp_matrix, build_vocabulary

logger = logging.getLogger(__name__)


# ==================== 配置 ====================

@dataclass(frozen=True)
class StrategyConfig:
    """摘要策略配置。

    Attributes:
        strategy: 策略，见 :data:`kpsumm.constants.STRATEGIES`；也接受 CLI 名称
            （如 ``"single-layer"``、``"concat"``）
        metric: KP-Centrality 使用的距离度量
        budget_words: 输出（以及每个中间摘要）的字数预算
        keyphrase_k: 融合后保留的关键短语数 K
        per_doc_keyphrases: 每篇文档抽取的候选关键短语数
        use_query: 簇有查询时是否把查询作为人工段落
        seed: 洗牌试验的随机种子
        mmr_lambda: MMR 的 λ
        mmr_sim1: MMR 段落与查询的相似度
        mmr_sim2: MMR 段落之间的相似度
        stopwords: 停用词；None 时读取默认表（或 KPSUMM_STOPWORDS）
    """

    strategy: str = DEFAULT_STRATEGY
    metric: MetricId = MetricId(COSINE)
    budget_words: int = DEFAULT_BUDGET_WORDS
    keyphrase_k: int = DEFAULT_KEYPHRASES
    per_doc_keyphrases: int = DEFAULT_PER_DOC_KEYPHRASES
    use_query: bool = True
    seed: Optional[int] = None
    mmr_lambda: float = DEFAULT_MMR_LAMBDA
    mmr_sim1: MetricId = MetricId(COSINE)
    mmr_sim2: MetricId = MetricId(COSINE)
    stopwords: Optional[FrozenSet[str]] = None

    def __post_init__(self):
        strategy = STRATEGY_ALIASES.get(self.strategy, self.strategy)
        if strategy not in STRATEGIES:
            raise ValueError(
                f"未知的策略: {self.strategy!r}，可选: {', '.join(STRATEGY_ALIASES)}"
            )
        object.__setattr__(self, "strategy", strategy)
        if self.budget_words < 1:
            raise ValueError(f"budget_words 必须 ≥ 1，当前收到: {self.budget_words!r}")
        if self.keyphrase_k < 1:
            raise ValueError(f"keyphrase_k 必须 ≥ 1，当前收到: {self.keyphrase_k!r}")
        if self.per_doc_keyphrases < 1:
            raise ValueError(
                f"per_doc_keyphrases 必须 ≥ 1，当前收到: {self.per_doc_keyphrases!r}"
            )
        if self.seed is not None and self.seed < 0:
            raise ValueError(f"seed 必须是非负整数，当前收到: {self.seed!r}")
        # λ 的范围由 MMRConfig 校验
        self.mmr_config

    @property
    def mmr_config(self) -> MMRConfig:
        """MMR 参数。"""
        return MMRConfig(self.mmr_lambda, self.mmr_sim1, self.mmr_sim2)


class Trial(NamedTuple):
    """一次洗牌试验。

    Attributes:
        permutation: 文档排列，第 k 位为原时间顺序中的文档序号
        doc_ids: 按处理顺序排列的文档 ID
        summary: 该排列下的摘要
    """

    permutation: Tuple[int, ...]
    doc_ids: Tuple[str, ...]
    summary: RankedSummary


# ==================== 单文档 ====================

def cluster_keyphrases(cluster: Cluster, cfg: StrategyConfig) -> KeyphraseSet:
    """按配置对簇抽取并融合关键短语。"""
    return extract_cluster_keyphrases(
        cluster,
        k=cfg.keyphrase_k,
        per_doc_n=cfg.per_doc_keyphrases,
        stopwords=cfg.stopwords,
    )


def summarize_document(
    doc: Document,
    keyphrases: KeyphraseSet,
    query: Optional[str],
    cfg: StrategyConfig,
) -> RankedSummary:
    """对单篇（伪）文档做 KP-Centrality 摘要。

    Args:
        doc: 文档，至少一个段落
        keyphrases: 簇级关键短语，这里只保留在 doc 中出现的
        query: 可选查询，仅在 ``cfg.use_query`` 为 True 时加入
        cfg: 策略配置

    Returns:
        RankedSummary: 字数不超过 ``cfg.budget_words`` 的摘要

    Raises:
        InputError: 文档没有段落
    """
    if not doc.passages:
        raise InputError(f"文档 {doc.id!r} 没有段落")

    passages = doc.passages
    phrases = filter_keyphrases_for_text(keyphrases, passages)
    vocab = build_vocabulary(passages)
    matrix = build_kp_matrix(passages, phrases, query if cfg.use_query else None, vocab)
    ranking = centrality_ranking(matrix, cfg.metric)
    summary = extract_summary(ranking, passages, cfg.budget_words)
    logger.debug(
        "文档 %s: %d 个段落, %d 个人工段落 → %d 个段落 / %d 词",
        doc.id, matrix.n_passages, matrix.n_artificial, len(summary), summary.total_words,
    )
    return summary


def _empty_summary(cfg: StrategyConfig) -> RankedSummary:
    return RankedSummary(passages=(), total_words=0, budget_words=cfg.budget_words)


def _summarize_passages(doc_id: str, summaries, keyphrases, query, cfg) -> RankedSummary:
    """把若干摘要的段落按给定顺序合并为伪文档并摘要；没有段落时返回空摘要。"""
    merged = passages_as_document(doc_id, (p for s in summaries for p in s.passages))
    if not merged.passages:
        logger.warning("⚠️ %s 没有可合并的段落，输出空摘要", doc_id)
        return _empty_summary(cfg)
    return summarize_document(merged, keyphrases, query, cfg)


# ==================== 多文档策略 ====================

def single_layer_summarize(
    cluster: Cluster,
    cfg: StrategyConfig,
    keyphrases: Optional[KeyphraseSet] = None,
) -> RankedSummary:
    """单层层级摘要：中间摘要按时间顺序拼接后再摘要一次。

    Args:
        cluster: 文档簇
        cfg: 策略配置
        keyphrases: 预先融合的关键短语；None 时现场抽取
    """
    if keyphrases is None:
        keyphrases = cluster_keyphrases(cluster, cfg)
    intermediates = [
        summarize_document(doc, keyphrases, cluster.query, cfg)
        for doc in cluster.documents
    ]
    return _summarize_passages(f"{cluster.id}:aggregate", intermediates, keyphrases, cluster.query, cfg)


def waterfall_summarize(
    cluster: Cluster,
    cfg: StrategyConfig,
    keyphrases: Optional[KeyphraseSet] = None,
) -> RankedSummary:
    """瀑布式摘要：按时间顺序逐篇合并中间摘要并重新摘要。

    单文档簇直接返回该文档的中间摘要。
    """
    if keyphrases is None:
        keyphrases = cluster_keyphrases(cluster, cfg)
    query = cluster.query

    documents = cluster.documents
    running = summarize_document(documents[0], keyphrases, query, cfg)
    for step, doc in enumerate(documents[1:], start=1):
        current = summarize_document(doc, keyphrases, query, cfg)
        running = _summarize_passages(
            f"{cluster.id}:merge{step}", [running, current], keyphrases, query, cfg
        )
    return running


def concat_baseline_summarize(
    cluster: Cluster,
    cfg: StrategyConfig,
    keyphrases: Optional[KeyphraseSet] = None,
) -> RankedSummary:
    """拼接基线：全部文档按时间顺序拼接后做一次单文档摘要。"""
    if keyphrases is None:
        keyphrases = cluster_keyphrases(cluster, cfg)
    doc = concat_documents(f"{cluster.id}:concat", cluster.documents)
    return summarize_document(doc, keyphrases, cluster.query, cfg)


_CENTRALITY_STRATEGIES = {
    SINGLE_LAYER: single_layer_summarize,
    WATERFALL: waterfall_summarize,
    CONCAT_BASELINE: concat_baseline_summarize,
}


def summarize_cluster(
    cluster: Cluster,
    cfg: StrategyConfig,
    keyphrases: Optional[KeyphraseSet] = None,
) -> RankedSummary:
    """按 ``cfg.strategy`` 分派。mmr 与 centroid 不使用关键短语。"""
    if cfg.strategy == MMR:
        return mmr_summarize(cluster, cfg)
    if cfg.strategy == CENTROID:
        return centroid_summarize(cluster, cfg)
    return _CENTRALITY_STRATEGIES[cfg.strategy](cluster, cfg, keyphrases)


# ==================== 洗牌试验 ====================

def shuffled_trials(cluster: Cluster, cfg: StrategyConfig, trials: int) -> List[Trial]:
    """用随机文档顺序替代时间顺序，重复运行配置的策略。

    每次试验从 ``SeedSequence(cfg.seed).spawn(trials)`` 派生的独立生成器中
    抽取一个均匀随机排列，因此结果只取决于种子与试验序号。关键短语与文档
    顺序无关，只融合一次。

    Args:
        cluster: 文档簇
        cfg: 策略配置，必须设置 seed
        trials: 试验次数（≥ 1）

    Returns:
        List[Trial]: 每次试验的排列与摘要

    Raises:
        ValueError: trials < 1 或未设置 seed
    """
    if trials < 1:
        raise ValueError(f"trials 必须 ≥ 1，当前收到: {trials!r}")
    if cfg.seed is None:
        raise ValueError("洗牌试验需要设置 seed 以保证可复现")

    keyphrases = None
    if cfg.strategy not in (MMR, CENTROID):
        keyphrases = cluster_keyphrases(cluster, cfg)

    results = []
    for child in np.random.SeedSequence(cfg.seed).spawn(trials):
        rng = np.random.default_rng(child)
        permutation = tuple(int(i) for i in rng.permutation(len(cluster.documents)))
        shuffled = cluster.reordered(permutation)
        summary = summarize_cluster(shuffled, cfg, keyphrases)
        results.append(Trial(
            permutation=permutation,
            doc_ids=tuple(doc.id for doc in shuffled.documents),
            summary=summary,
        ))
    logger.debug("簇 %s 完成 %d 次洗牌试验", cluster.id, trials)
    return results
