"""
向量空间模块
============

构建词表、TF-IDF 权重，以及由段落、关键短语和可选查询组成的紧凑矩阵表示。

矩阵的每一“列”（本实现中存为 numpy 行向量）对应一个段落或人工段落
（关键短语、查询），列序为：全部真实段落（原文顺序）、关键短语、查询。

TF-IDF 权重::

    w(t) = tf(t) × (ln((1 + n) / (1 + df(t))) + 1)

其中 tf 为原始计数，n 为当前输入（文档或层级中间文本）的段落数，df 为包含 t
的段落数。词表外的词元被忽略。
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np
from scipy import sparse
from sklearn.feature_extraction.text import CountVectorizer, TfidfTransformer

from .corpus import Passage, tokenize
from .errors import InputError

logger = logging.getLogger(__name__)


class ColumnKind:
    """矩阵列标签。"""

    #: 真实段落，可被抽取
    PASSAGE = "passage"

    #: 关键短语（人工段落）
    KEYPHRASE = "keyphrase"

    #: 查询（人工段落）
    QUERY = "query"


def _analyze(tokens: Sequence[str]) -> List[str]:
    """CountVectorizer 分析器：输入已是词元序列。"""
    return list(tokens)


# ==================== 词表 ====================

@dataclass(frozen=True)
class Vocabulary:
    """词表。

    Attributes:
        terms: 按字典序排列的唯一词元
        term_index: 词元 → 行序号（0..T-1 的双射）
        document_frequency: 词元 → 包含它的段落数（≥ 1）
    """

    terms: Tuple[str, ...]
    term_index: Dict[str, int]
    document_frequency: Dict[str, int]

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, token: str) -> bool:
        return token in self.term_index


def build_vocabulary(passages: Sequence[Passage]) -> Vocabulary:
    """由段落构建词表，df 按段落计数（而非出现次数）。

    Args:
        passages: 段落序列

    Returns:
        Vocabulary: 词表

    Raises:
        InputError: 没有段落或所有段落都没有词元
    """
    token_lists = [p.tokens for p in passages]
    if not any(token_lists):
        raise InputError("所有段落都没有词元，无法构建词表")

    vectorizer = CountVectorizer(analyzer=_analyze, binary=True)
    presence = vectorizer.fit_transform(token_lists)
    terms = tuple(str(t) for t in vectorizer.get_feature_names_out())
    df = np.asarray(presence.sum(axis=0)).ravel()
    return Vocabulary(
        terms=terms,
        term_index={t: i for i, t in enumerate(terms)},
        document_frequency={t: int(df[i]) for i, t in enumerate(terms)},
    )


def _term_counter(vocab: Vocabulary) -> CountVectorizer:
    return CountVectorizer(analyzer=_analyze, vocabulary=vocab.term_index)


def _fit_idf(vocab: Vocabulary, n_passages: int) -> TfidfTransformer:
    """按词表的 df 拟合 TfidfTransformer。

    出现矩阵为 n_passages × T，第 j 列的前 df(t_j) 行为 1，与原段落的
    出现矩阵有相同的 df 与样本数，因而得到相同的 idf。
    """
    df = np.array([vocab.document_frequency[t] for t in vocab.terms], dtype=int)
    if df.size and df.max() > n_passages:
        raise ValueError(f"n_passages={n_passages} 小于词表中的最大 df={int(df.max())}")
    rows = np.concatenate([np.arange(d) for d in df]) if df.size else np.zeros(0, dtype=int)
    cols = np.repeat(np.arange(df.size), df)
    presence = sparse.csr_matrix(
        (np.ones(rows.size), (rows, cols)), shape=(n_passages, df.size)
    )
    return TfidfTransformer(norm=None, smooth_idf=True).fit(presence)


def tfidf_vector(tokens: Sequence[str], vocab: Vocabulary, n_passages: int) -> np.ndarray:
    """计算单个词元序列的 TF-IDF 向量。

    与 :func:`build_kp_matrix` 使用同一组 CountVectorizer + TfidfTransformer。

    Args:
        tokens: 词元序列
        vocab: 同一输入构建的词表
        n_passages: 输入的段落数（≥ 1，且不小于词表中的 df）

    Returns:
        np.ndarray: 长度为 T 的非负权重向量；空输入得到零向量
    """
    if n_passages < 1:
        raise ValueError(f"n_passages 必须 ≥ 1，当前收到: {n_passages!r}")
    counts = _term_counter(vocab).transform([list(tokens)])
    return _fit_idf(vocab, n_passages).transform(counts).toarray()[0]


# ==================== KP 矩阵 ====================

@dataclass(frozen=True)
class KPMatrix:
    """词元 × (段落 + 人工段落) 权重矩阵。

    Attributes:
        vocabulary: 词表
        passage_columns: 形状 (N, T)，每行一个真实段落
        artificial_columns: 形状 (M, T)，关键短语在前，查询（若有）在最后
        column_labels: 长度 N + M 的列标签，取值见 :class:`ColumnKind`
        artificial_texts: 人工段落原文，与 artificial_columns 平行
    """

    vocabulary: Vocabulary
    passage_columns: np.ndarray
    artificial_columns: np.ndarray
    column_labels: Tuple[str, ...]
    artificial_texts: Tuple[str, ...] = ()

    @property
    def n_passages(self) -> int:
        """真实段落数 N。"""
        return int(self.passage_columns.shape[0])

    @property
    def n_artificial(self) -> int:
        """人工段落数 M。"""
        return int(self.artificial_columns.shape[0])

    @property
    def n_columns(self) -> int:
        """总列数 N + M。"""
        return self.n_passages + self.n_artificial

    @property
    def columns(self) -> np.ndarray:
        """全部列，形状 (N + M, T)。"""
        return np.vstack([self.passage_columns, self.artificial_columns])

    @property
    def query_column(self) -> Optional[np.ndarray]:
        """查询列；没有查询时为 None。"""
        for offset, label in enumerate(self.column_labels[self.n_passages:]):
            if label == ColumnKind.QUERY:
                return self.artificial_columns[offset]
        return None

    def is_artificial(self, column: int) -> bool:
        """列是否为人工段落。"""
        return self.column_labels[column] != ColumnKind.PASSAGE


def build_kp_matrix(
    passages: Sequence[Passage],
    keyphrases: Sequence[str],
    query: Optional[str],
    vocab: Vocabulary,
) -> KPMatrix:
    """构建 KP 矩阵。

    每个段落一列（原文顺序），随后每个关键短语一列（分词后按伪段落计算 TF-IDF），
    有查询时最后追加一列查询。全零的人工列被丢弃并记录警告。

    Args:
        passages: 当前输入的段落
        keyphrases: 已按当前输入过滤的关键短语
        query: 可选查询
        vocab: 由这些段落构建的词表

    Returns:
        KPMatrix: 矩阵

    Raises:
        InputError: 没有段落，或段落的词元全不在词表中
    """
    if not passages:
        raise InputError("KP 矩阵至少需要一个段落列")

    artificial_texts = list(keyphrases)
    artificial_labels = [ColumnKind.KEYPHRASE] * len(artificial_texts)
    if query:
        artificial_texts.append(query)
        artificial_labels.append(ColumnKind.QUERY)

    counter = _term_counter(vocab)
    passage_counts = counter.transform([p.tokens for p in passages])
    transformer = TfidfTransformer(norm=None, smooth_idf=True).fit(passage_counts)
    passage_columns = transformer.transform(passage_counts).toarray()

    empty = np.flatnonzero(~passage_columns.any(axis=1))
    if empty.size:
        first = passages[int(empty[0])]
        raise InputError(f"段落 {first.key!r} 的词元不在词表中")

    if artificial_texts:
        artificial_counts = counter.transform([tokenize(text) for text in artificial_texts])
        artificial_columns = transformer.transform(artificial_counts).toarray()
    else:
        artificial_columns = np.zeros((0, len(vocab)), dtype=float)

    keep = artificial_columns.any(axis=1) if artificial_texts else np.zeros(0, dtype=bool)
    for text, label, kept in zip(artificial_texts, artificial_labels, keep):
        if not kept:
            logger.warning("⚠️ 丢弃全零的%s列: %r", "查询" if label == ColumnKind.QUERY else "关键短语", text)

    return KPMatrix(
        vocabulary=vocab,
        passage_columns=passage_columns,
        artificial_columns=artificial_columns[keep],
        column_labels=tuple(
            [ColumnKind.PASSAGE] * len(passages)
            + [label for label, kept in zip(artificial_labels, keep) if kept]
        ),
        artificial_texts=tuple(text for text, kept in zip(artificial_texts, keep) if kept),
    )
