"""
kpsumm - 基于关键短语的抽取式多文档摘要
========================================

以 KP-Centrality 单文档摘要为基础，通过层级组合生成多文档摘要。

Features:
    - KP-Centrality：关键短语作为人工段落参与支持集计算，按中心度排序段落
    - 七种距离：cosine、euclidean、manhattan、chebyshev、minkowski(p)、
      frac133、Jensen-Shannon
    - 层级组合：单层（single-layer）与瀑布式（waterfall），以及拼接基线
    - 基线：MMR（查询驱动）与质心排序
    - 洗牌试验：用随机文档顺序替代时间顺序，种子确定、可复现
    - 评估：多参考 ROUGE-1 / ROUGE-2 召回率与 TSV 报告

Installation:
    .. code-block:: bash

        pip install bw-kpsumm

Quick Start:
    .. code-block:: python

        from kpsumm import Summarizer, load_cluster

        cluster = load_cluster("data/D0730G")

        # 默认 waterfall + cosine + 40 个关键短语 + 250 词
        summarizer = Summarizer()
        print(summarizer.summarize(cluster).text)

        # 单层层级 + frac133
        summarizer = Summarizer.from_options(strategy="single-layer", distance="frac133")
        for trial in summarizer.shuffled_trials(cluster, trials=10):
            print(trial.permutation, trial.summary.total_words)

Modules:
    - :class:`Summarizer`: 主入口
    - :mod:`kpsumm.corpus`: 簇读取、分句与分词
    - :mod:`kpsumm.centrality`: 支持集、排序与预算抽取
    - :mod:`kpsumm.multidoc`: 层级组合与洗牌试验
    - :mod:`kpsumm.rouge`: ROUGE 评估

Note:
    命令行入口为 ``kpsumm``（或 ``python -m kpsumm``），见 :mod:`kpsumm.cli`。
"""

from .summarizer import Summarizer, ClusterScore
from .corpus import Cluster, Document, Passage, load_cluster, load_clusters
from .metrics import MetricId, parse_metric
from .keyphrase import KeyphraseSet, load_stopwords
from .centrality import RankedSummary
from .multidoc import StrategyConfig, Trial
from .rouge import RougeScore, rouge_n_score
from .errors import KpSummError, InputError, DomainError

#: 版本号
__version__ = "1.0.0"

#: 作者
__author__ = "BlueWorm-EAI-Tech"

#: 版本发布日期
__release_date__ = "2026-10-18"

__all__ = [
    "Summarizer",
    "ClusterScore",
    "Cluster",
    "Document",
    "Passage",
    "load_cluster",
    "load_clusters",
    "MetricId",
    "parse_metric",
    "KeyphraseSet",
    "load_stopwords",
    "RankedSummary",
    "StrategyConfig",
    "Trial",
    "RougeScore",
    "rouge_n_score",
    "KpSummError",
    "InputError",
    "DomainError",
]
