"""
摘要器主类
==========

提供多文档摘要的统一入口：按策略分派、洗牌试验与 ROUGE 评估。

Example:
    .. code-block:: python

        from kpsumm import Summarizer, load_cluster

        cluster = load_cluster("data/D0730G")

        summarizer = Summarizer.from_options(strategy="waterfall", distance="cosine")
        summary = summarizer.summarize(cluster)
        print(summary.text)

        # 有 refs/ 时评估
        score = summarizer.evaluate(cluster)
        print(f"R1={score.r1:.4f} R2={score.r2:.4f}")
"""

from dataclasses import replace
from pathlib import Path
from typing import List, NamedTuple, Optional, Union

from .centrality import RankedSummary
from .constants import CENTROID, DEFAULT_DISTANCE, DEFAULT_STRATEGY, MMR, STRATEGY_LABELS
from .corpus import Cluster
from .keyphrase import KeyphraseSet, load_stopwords
from .metrics import COSINE, parse_metric
from .multidoc import StrategyConfig, Trial, cluster_keyphrases, shuffled_trials, summarize_cluster
from .rouge import ReportRow, RougeScore, evaluate_cluster


class ClusterScore(NamedTuple):
    """一个簇（或一次洗牌试验）的评估结果。

    Attributes:
        label: 簇 ID，洗牌试验为 ``<cluster>/trial<k>``
        summary: 被评估的摘要
        rouge1: ROUGE-1
        rouge2: ROUGE-2
    """

    label: str
    summary: RankedSummary
    rouge1: RougeScore
    rouge2: RougeScore

    @property
    def r1(self) -> float:
        return self.rouge1.recall

    @property
    def r2(self) -> float:
        return self.rouge2.recall


class Summarizer:
    """多文档摘要器。

    持有一份 :class:`StrategyConfig`，停用词在构造时读取一次并冻结在配置中，
    同一个摘要器可安全地在多个线程间共享。

    Attributes:
        config (StrategyConfig): 策略配置
    """

    def __init__(
        self,
        config: Optional[StrategyConfig] = None,
        stopwords_path: Optional[Union[str, Path]] = None,
    ):
        """初始化摘要器。

        Args:
            config: 策略配置，默认 waterfall + cosine
            stopwords_path: 停用词文件；未给出时依次使用配置中的停用词、
                环境变量 ``KPSUMM_STOPWORDS`` 与包内默认表
        """
        config = config or StrategyConfig()
        if stopwords_path is not None or config.stopwords is None:
            config = replace(config, stopwords=load_stopwords(stopwords_path))
        self._config = config

    @classmethod
    def from_options(
        cls,
        strategy: str = DEFAULT_STRATEGY,
        distance: str = DEFAULT_DISTANCE,
        stopwords_path: Optional[Union[str, Path]] = None,
        **options,
    ) -> "Summarizer":
        """由 CLI 风格的名称构造摘要器。

        Args:
            strategy: 策略名，如 ``"single-layer"``、``"waterfall"``、``"mmr"``
            distance: 距离名，如 ``"cosine"``、``"frac133"``、``"minkowski:2.5"``
            stopwords_path: 停用词文件
            **options: 其余 :class:`StrategyConfig` 字段

        Example:
            .. code-block:: python

                summarizer = Summarizer.from_options(
                    strategy="single-layer", distance="frac133", budget_words=100,
                )
        """
        config = StrategyConfig(strategy=strategy, metric=parse_metric(distance), **options)
        return cls(config, stopwords_path=stopwords_path)

    @property
    def config(self) -> StrategyConfig:
        return self._config

    @property
    def label(self) -> str:
        """报告中使用的策略名（CLI 写法）。"""
        return STRATEGY_LABELS[self._config.strategy]

    @property
    def metric_label(self) -> str:
        """报告中使用的距离名。

        mmr / centroid 不使用 KP-Centrality 距离：centroid 记为 cosine，
        mmr 记为 Sim1（两者不同时为 ``Sim1/Sim2``）。
        """
        cfg = self._config
        if cfg.strategy == CENTROID:
            return COSINE
        if cfg.strategy == MMR:
            sim1, sim2 = str(cfg.mmr_sim1), str(cfg.mmr_sim2)
            return sim1 if sim1 == sim2 else f"{sim1}/{sim2}"
        return str(cfg.metric)

    def keyphrases(self, cluster: Cluster) -> KeyphraseSet:
        """簇级融合关键短语。"""
        return cluster_keyphrases(cluster, self._config)

    def summarize(self, cluster: Cluster) -> RankedSummary:
        """按时间顺序摘要一个簇。

        Raises:
            DomainError: mmr 策略且簇没有查询
        """
        return summarize_cluster(cluster, self._config)

    def shuffled_trials(self, cluster: Cluster, trials: int) -> List[Trial]:
        """洗牌试验，见 :func:`kpsumm.multidoc.shuffled_trials`。"""
        return shuffled_trials(cluster, self._config, trials)

    def score(self, summary: RankedSummary, cluster: Cluster, label: Optional[str] = None) -> ClusterScore:
        """用簇的参考摘要评估给定摘要。"""
        rouge1, rouge2 = evaluate_cluster(summary, cluster)
        return ClusterScore(label or cluster.id, summary, rouge1, rouge2)

    def evaluate(self, cluster: Cluster) -> ClusterScore:
        """摘要并评估一个簇。

        Raises:
            DomainError: 簇没有参考摘要
        """
        return self.score(self.summarize(cluster), cluster)

    def evaluate_trials(self, cluster: Cluster, trials: int) -> List[ClusterScore]:
        """对每次洗牌试验评估，标签为 ``<cluster>/trial<k>``。"""
        return [
            self.score(trial.summary, cluster, f"{cluster.id}/trial{k}")
            for k, trial in enumerate(self.shuffled_trials(cluster, trials), start=1)
        ]

    def report_row(self, score: ClusterScore) -> ReportRow:
        """评估结果对应的报告行。"""
        return ReportRow(score.label, self.label, self.metric_label, score.r1, score.r2)

    def __repr__(self) -> str:
        cfg = self._config
        return (
            f"Summarizer(strategy={self.label!r}, metric={self.metric_label!r}, "
            f"budget_words={cfg.budget_words}, keyphrase_k={cfg.keyphrase_k})"
        )
