"""
关键短语模块
============

逐篇文档抽取候选关键短语，按文档频率跨文档融合，选出全局前 K 个，
并在生成每个摘要时过滤掉不出现在当前输入中的短语。

抽取器为无监督的 TF-IDF n-gram 打分：候选为连续的 1~3 元词元序列，
不以停用词开头或结尾且至少含一个字母词元；分数为成员词元在文档内的
TF-IDF 之和。

Example:
    .. code-block:: python

        from kpsumm.keyphrase import extract_cluster_keyphrases

        keyphrases = extract_cluster_keyphrases(cluster, k=40)
        print([kp.phrase for kp in keyphrases.phrases])
"""

from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple, Union
import hashlib
import logging
import math
import os

import numpy as np
from sklearn.feature_extraction.text import CountVectorizer

from .constants import (
    DEFAULT_KEYPHRASES,
    DEFAULT_PER_DOC_KEYPHRASES,
    ENV_STOPWORDS,
    MAX_KEYPHRASE_TOKENS,
    STOPWORDS_FILE,
    STOPWORDS_SHA256,
)
from .corpus import Cluster, Document, Passage, tokenize
from .errors import InputError
from .vectorspace import Vocabulary, build_vocabulary, tfidf_vector

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

#: 单篇文档的抽取结果：(短语, 分数) 序列
Extraction = List[Tuple[str, float]]


# ==================== 停用词 ====================

def _parse_stopwords(text: str) -> FrozenSet[str]:
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            words.add(line)
    return frozenset(words)


def load_stopwords(path: Optional[PathLike] = None) -> FrozenSet[str]:
    """读取停用词表。

    优先级：显式 ``path`` > 环境变量 ``KPSUMM_STOPWORDS`` > 包内默认表。
    包内默认表读入时校验 SHA-256。

    Args:
        path: 停用词文件，每行一个词，``#`` 之后为注释

    Returns:
        FrozenSet[str]: 小写停用词集合

    Raises:
        InputError: 指定的文件不可读
        RuntimeError: 包内默认表校验和不一致
    """
    override = path or os.environ.get(ENV_STOPWORDS)
    if override:
        try:
            return _parse_stopwords(Path(override).read_text(encoding="utf-8"))
        except (OSError, UnicodeDecodeError) as e:
            raise InputError(f"无法读取停用词文件 {override}: {e}") from e

    data = STOPWORDS_FILE.read_bytes()
    digest = hashlib.sha256(data).hexdigest()
    if digest != STOPWORDS_SHA256:
        raise RuntimeError(
            f"默认停用词表校验和不一致: {digest}，期望 {STOPWORDS_SHA256}"
        )
    return _parse_stopwords(data.decode("utf-8"))


# ==================== 数据类型 ====================

class Keyphrase(NamedTuple):
    """融合后的关键短语。"""

    phrase: str
    score: float
    doc_count: int


@dataclass(frozen=True)
class KeyphraseSet:
    """融合后的关键短语集合。

    排序：(doc_count 降序, 总分降序, 短语字典序升序)；长度 ≤ K。

    Attributes:
        phrases: 关键短语
        k: 容量上限
    """

    phrases: Tuple[Keyphrase, ...]
    k: int

    def __len__(self) -> int:
        return len(self.phrases)

    def __iter__(self):
        return iter(self.phrases)

    @property
    def texts(self) -> List[str]:
        """短语文本列表。"""
        return [kp.phrase for kp in self.phrases]


# ==================== 抽取 ====================

def _identity(tokens):
    return tokens


def _ngram_counter(max_n: int, vocabulary=None) -> CountVectorizer:
    """在已分好的词元序列上计数连续 1~max_n 元组，n 元组以空格连接。"""
    return CountVectorizer(
        tokenizer=_identity,
        preprocessor=_identity,
        lowercase=False,
        token_pattern=None,
        ngram_range=(1, max_n),
        vocabulary=vocabulary,
    )


def _is_candidate(gram: Sequence[str], stopwords: FrozenSet[str]) -> bool:
    if gram[0] in stopwords or gram[-1] in stopwords:
        return False
    return any(any(c.isalpha() for c in token) for token in gram)


def extract_document_keyphrases(
    doc: Document,
    vocab: Vocabulary,
    per_doc_n: int = DEFAULT_PER_DOC_KEYPHRASES,
    stopwords: Optional[FrozenSet[str]] = None,
) -> Extraction:
    """抽取单篇文档的关键短语。

    Args:
        doc: 文档
        vocab: 由该文档段落构建的词表
        per_doc_n: 返回的短语数上限（≥ 1）
        stopwords: 停用词；None 时读取默认表

    Returns:
        List[Tuple[str, float]]: 按 (分数降序, 短语升序) 排列的前 per_doc_n 个短语
    """
    if per_doc_n < 1:
        raise ValueError(f"per_doc_n 必须 ≥ 1，当前收到: {per_doc_n!r}")
    if stopwords is None:
        stopwords = load_stopwords()

    token_lists = [list(p.tokens) for p in doc.passages if p.tokens]
    scores: Dict[str, float] = {}
    if token_lists:
        all_tokens = [t for tokens in token_lists for t in tokens]
        weights = tfidf_vector(all_tokens, vocab, len(doc.passages))

        counter = _ngram_counter(MAX_KEYPHRASE_TOKENS).fit(token_lists)
        for phrase in counter.get_feature_names_out():
            gram = str(phrase).split(" ")
            if _is_candidate(gram, stopwords):
                scores[str(phrase)] = math.fsum(
                    weights[vocab.term_index[t]] for t in gram if t in vocab.term_index
                )

    if not scores:
        logger.warning("⚠️ 文档 %s 没有合格的候选关键短语", doc.id)
        return []

    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:per_doc_n]


def fuse_keyphrases(per_doc: Sequence[Extraction], k: int = DEFAULT_KEYPHRASES) -> KeyphraseSet:
    """按文档频率融合各文档的抽取结果。

    Args:
        per_doc: 每篇文档的抽取结果
        k: 保留的短语数（≥ 1）

    Returns:
        KeyphraseSet: 去重后按 (doc_count 降序, 总分降序, 短语升序) 排列的前 k 个短语
    """
    if k < 1:
        raise ValueError(f"关键短语数量 K 必须 ≥ 1，当前收到: {k!r}")

    doc_counts: Dict[str, int] = defaultdict(int)
    doc_scores: Dict[str, List[float]] = defaultdict(list)
    for extraction in per_doc:
        for phrase, score in dict(extraction).items():
            doc_counts[phrase] += 1
            doc_scores[phrase].append(score)

    fused = [
        Keyphrase(phrase, math.fsum(sorted(doc_scores[phrase])), doc_counts[phrase])
        for phrase in doc_counts
    ]
    fused.sort(key=lambda kp: (-kp.doc_count, -kp.score, kp.phrase))
    return KeyphraseSet(phrases=tuple(fused[:k]), k=k)


def filter_keyphrases_for_text(keyphrases: KeyphraseSet, passages: Sequence[Passage]) -> List[str]:
    """保留在当前输入中连续出现的关键短语，顺序不变。

    Example:
        短语 "line item veto" 只有在某个段落的词元序列中连续出现时才保留；
        三个词分散出现时被排除。
    """
    grams = {kp.phrase: " ".join(tokenize(kp.phrase)) for kp in keyphrases}
    wanted = sorted({gram for gram in grams.values() if gram})
    token_lists = [list(p.tokens) for p in passages]
    if not wanted or not token_lists:
        return []

    max_n = max(len(gram.split(" ")) for gram in wanted)
    counter = _ngram_counter(max_n, vocabulary={gram: i for i, gram in enumerate(wanted)})
    present = np.asarray(counter.transform(token_lists).sum(axis=0)).ravel() > 0
    found = {gram for gram, hit in zip(wanted, present) if hit}
    return [kp.phrase for kp in keyphrases if grams[kp.phrase] in found]


def extract_cluster_keyphrases(
    cluster: Cluster,
    k: int = DEFAULT_KEYPHRASES,
    per_doc_n: int = DEFAULT_PER_DOC_KEYPHRASES,
    stopwords: Optional[FrozenSet[str]] = None,
) -> KeyphraseSet:
    """对簇内每篇原始文档抽取关键短语并融合（每个簇只做一次）。"""
    if stopwords is None:
        stopwords = load_stopwords()
    per_doc = [
        extract_document_keyphrases(doc, build_vocabulary(doc.passages), per_doc_n, stopwords)
        for doc in cluster.documents
    ]
    keyphrases = fuse_keyphrases(per_doc, k)
    logger.debug("簇 %s 融合得到 %d 个关键短语", cluster.id, len(keyphrases))
    return keyphrases
