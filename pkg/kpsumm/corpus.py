"""
语料模块
========

从磁盘读取文档簇，切分段落（句子），分词，并确定文档的时间顺序。

簇目录布局::

    <cluster>/docs/*.txt        每个 UTF-8 文件一篇文档
    <cluster>/manifest.tsv      可选；每行 "filename<TAB>ISO-8601 日期"
    <cluster>/query.txt         可选；单行查询
    <cluster>/refs/*.txt        零个或多个参考摘要

清单中的文件按日期排序（同日期按文件名），清单外的文件排在其后，按文件名排序；
没有清单时按文件名字典序排序。

Example:
    .. code-block:: python

        from kpsumm.corpus import load_cluster

        cluster = load_cluster("data/D0730G")
        for doc in cluster.documents:
            print(doc.id, len(doc.passages))
"""

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union
import logging
import re

from .constants import ABBREVIATIONS, TITLE_CASE_ABBREVIATIONS, Layout
from .errors import InputError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_PARAGRAPH_BREAK = re.compile(r"\n[ \t\r\f\v]*\n")
_SENTENCE_END = re.compile(r"[.!?]+[\"'”’)\]]*\s+")
_OPENING_QUOTES = "\"'“‘([{"
_TOKEN = re.compile(r"[^\W_]+")


# ==================== 数据类型 ====================

@dataclass(frozen=True)
class Passage:
    """段落（句子），抽取的基本单位。

    Attributes:
        doc_id: 所属文档 ID
        index: 在所属文档中的序号
        text: 原文，空白已折叠为单个空格
        tokens: 小写词元序列
        word_count: 原文按空白切分的词数（预算计数依据）
    """

    doc_id: str
    index: int
    text: str
    tokens: Tuple[str, ...]
    word_count: int

    @property
    def key(self) -> Tuple[str, int]:
        """段落身份 ``(doc_id, index)``，在簇内唯一。"""
        return (self.doc_id, self.index)


@dataclass(frozen=True)
class Document:
    """文档。

    源文档的段落序号为 0..len-1 且无空缺；由摘要或拼接得到的伪文档中，
    段落保留其来源身份。

    Attributes:
        id: 文档 ID（源文档为文件名去后缀）
        order_key: 时间序号，越小越早
        raw_text: 原文
        passages: 按原文顺序排列的段落
        timestamp: 清单中给出的日期，可能为 None
    """

    id: str
    order_key: int
    raw_text: str
    passages: Tuple[Passage, ...]
    timestamp: Optional[datetime] = None

    @property
    def word_count(self) -> int:
        """全部段落的词数之和。"""
        return sum(p.word_count for p in self.passages)


@dataclass(frozen=True)
class Cluster:
    """文档簇：多文档摘要的输入单位。

    Attributes:
        id: 簇 ID（目录名）
        documents: 按 (order_key, id) 升序排列的文档
        query: 可选查询
        references: 参考摘要原文
    """

    id: str
    documents: Tuple[Document, ...]
    query: Optional[str] = None
    references: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.documents:
            raise InputError(f"簇 {self.id!r} 至少需要一篇文档")
        keys = [(doc.order_key, doc.id) for doc in self.documents]
        if keys != sorted(keys):
            raise ValueError(f"簇 {self.id!r} 的文档未按时间顺序排列")
        seen = set()
        for passage in self.passages:
            if passage.key in seen:
                raise ValueError(f"簇 {self.id!r} 中段落身份重复: {passage.key!r}")
            seen.add(passage.key)

    @property
    def passages(self) -> List[Passage]:
        """按时间顺序拼接的全部段落。"""
        return [p for doc in self.documents for p in doc.passages]

    @property
    def word_count(self) -> int:
        """全部文档的词数之和。"""
        return sum(doc.word_count for doc in self.documents)

    def reordered(self, permutation: Sequence[int]) -> "Cluster":
        """按给定排列重排文档，并重新分配 order_key。

        Args:
            permutation: 当前文档序号的一个排列

        Returns:
            Cluster: 新簇，第 k 篇文档为 ``documents[permutation[k]]``

        Raises:
            ValueError: permutation 不是 0..n-1 的排列
        """
        order = [int(i) for i in permutation]
        if sorted(order) != list(range(len(self.documents))):
            raise ValueError(f"不是合法的文档排列: {order!r}")
        documents = tuple(
            replace(self.documents[i], order_key=position)
            for position, i in enumerate(order)
        )
        return replace(self, documents=documents)


# ==================== 分句与分词 ====================

def tokenize(text: str) -> List[str]:
    """分词：转小写，按非字母数字字符切分，丢弃空词元，保留数字。

    Example:
        >>> tokenize("The Cat, sat!")
        ['the', 'cat', 'sat']
    """
    return _TOKEN.findall(text.lower())


def _is_abbreviation(sentence_prefix: str) -> bool:
    """句点前的词是否为缩写或单字母首字母。"""
    words = sentence_prefix.split()
    if not words:
        return False
    raw = words[-1].lstrip(_OPENING_QUOTES).rstrip(".")
    word = raw.lower()
    if word in ABBREVIATIONS:
        return True
    if word in TITLE_CASE_ABBREVIATIONS:
        return raw[:1].isupper()
    return len(word) == 1 and word.isalpha()


def _split_paragraph(paragraph: str) -> List[str]:
    sentences = []
    start = 0
    for match in _SENTENCE_END.finditer(paragraph):
        end = match.end()
        if end >= len(paragraph):
            break
        following = paragraph[end]
        if not (following.isupper() or following.isdigit() or following in _OPENING_QUOTES):
            continue
        if match.group().startswith(".") and not match.group().startswith(".."):
            if _is_abbreviation(paragraph[start:match.start() + 1]):
                continue
        sentences.append(paragraph[start:end].strip())
        start = end
    sentences.append(paragraph[start:].strip())
    return [s for s in sentences if s]


def segment_passages(raw_text: str) -> List[str]:
    """规则分句。

    在终止标点（``.``、``!``、``?``，可跟随右引号/右括号）之后、且后接空白与
    大写字母/引号/数字处切分；缩写停止表中的词与单字母首字母后的句点不切分；
    段落空行总是切分。无终止标点的文本返回单个段落。

    Args:
        raw_text: 原文

    Returns:
        List[str]: 去除首尾空白的非空段落文本

    Example:
        >>> segment_passages("A cat sat. A dog ran.")
        ['A cat sat.', 'A dog ran.']
        >>> segment_passages("Mr. Smith left.")
        ['Mr. Smith left.']
    """
    passages = []
    for paragraph in _PARAGRAPH_BREAK.split(raw_text):
        passages.extend(_split_paragraph(paragraph))
    return passages


def _merge_tokenless(texts: Sequence[str]) -> List[str]:
    """将没有任何词元的片段（如孤立的破折号）并入相邻段落，不丢失字符。"""
    merged: List[str] = []
    pending = ""
    for text in texts:
        if not tokenize(text):
            if merged:
                merged[-1] = f"{merged[-1]} {text}"
            else:
                pending = f"{pending} {text}".strip()
            continue
        merged.append(f"{pending} {text}".strip() if pending else text)
        pending = ""
    return merged


def make_passage(doc_id: str, index: int, text: str) -> Passage:
    """由原文构造段落；段内换行与连续空白折叠为单个空格，摘要文件因此每行一个段落。"""
    text = " ".join(text.split())
    return Passage(
        doc_id=doc_id,
        index=index,
        text=text,
        tokens=tuple(tokenize(text)),
        word_count=len(text.split()),
    )


def make_document(
    doc_id: str,
    raw_text: str,
    order_key: int = 0,
    timestamp: Optional[datetime] = None,
) -> Document:
    """切分原文并构造文档。

    没有任何词元的文本得到零段落文档，由调用方决定是否跳过。
    """
    texts = _merge_tokenless(segment_passages(raw_text)) if raw_text.strip() else []
    passages = tuple(make_passage(doc_id, i, text) for i, text in enumerate(texts))
    return Document(
        id=doc_id,
        order_key=order_key,
        raw_text=raw_text,
        passages=passages,
        timestamp=timestamp,
    )


def passages_as_document(doc_id: str, passages: Iterable[Passage], order_key: int = 0) -> Document:
    """将一组段落包装为伪文档，段落保留来源身份。

    用于把中间摘要或多篇文档的拼接交给单文档摘要方法。
    """
    passages = tuple(passages)
    return Document(
        id=doc_id,
        order_key=order_key,
        raw_text="\n\n".join(p.text for p in passages),
        passages=passages,
    )


def concat_documents(doc_id: str, documents: Iterable[Document], order_key: int = 0) -> Document:
    """按给定顺序拼接文档为一篇伪文档。"""
    return passages_as_document(
        doc_id,
        (p for doc in documents for p in doc.passages),
        order_key=order_key,
    )


# ==================== 簇加载 ====================

def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"无法读取文件 {path.name}: {e}") from e


def _parse_date(value: str) -> datetime:
    value = value.strip()
    # Python 3.10 及以下的 fromisoformat 不接受结尾的 "Z"
    if value.endswith(("Z", "z")):
        value = value[:-1] + "+00:00"
    parsed = datetime.fromisoformat(value)
    if parsed.tzinfo is not None:
        parsed = parsed.astimezone(timezone.utc).replace(tzinfo=None)
    return parsed


def _read_manifest(path: Path) -> Dict[str, datetime]:
    """读取 ``filename<TAB>ISO-8601 日期`` 清单。"""
    dates: Dict[str, datetime] = {}
    for lineno, line in enumerate(_read_text(path).splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise InputError(f"{path.name} 第 {lineno} 行格式错误，应为 filename<TAB>date: {line!r}")
        name, value = parts[0].strip(), parts[1].strip()
        try:
            dates[name] = _parse_date(value)
        except ValueError as e:
            raise InputError(f"{path.name} 第 {lineno} 行日期无法解析: {value!r}") from e
    return dates


def _chronological(files: Sequence[Path], dates: Dict[str, datetime]) -> List[Path]:
    names = {f.name for f in files}
    for missing in sorted(set(dates) - names):
        logger.warning("⚠️ 清单中的文件不存在于 docs/: %s", missing)
    dated = sorted((f for f in files if f.name in dates), key=lambda f: (dates[f.name], f.name))
    undated = sorted((f for f in files if f.name not in dates), key=lambda f: f.name)
    return dated + undated


def _text_files(directory: Path) -> List[Path]:
    return sorted(
        p for p in directory.iterdir()
        if p.is_file() and p.suffix == Layout.TEXT_SUFFIX
    )


def load_cluster(path: PathLike) -> Cluster:
    """读取一个簇目录。

    Args:
        path: 簇目录

    Returns:
        Cluster: 文档按时间顺序排列；存在时一并读取查询与参考摘要

    Raises:
        InputError: 缺少 docs/ 子目录、文件不可读、清单格式错误或没有可用文档

    Note:
        空文档（没有任何词元）会被跳过并记录警告。
    """
    root = Path(path)
    docs_dir = root / Layout.DOCS_DIR
    if not docs_dir.is_dir():
        raise InputError(f"簇目录缺少 {Layout.DOCS_DIR}/ 子目录: {root}")

    manifest = root / Layout.MANIFEST
    dates = _read_manifest(manifest) if manifest.is_file() else {}

    documents: List[Document] = []
    for doc_path in _chronological(_text_files(docs_dir), dates):
        doc = make_document(
            doc_path.stem,
            _read_text(doc_path),
            order_key=len(documents),
            timestamp=dates.get(doc_path.name),
        )
        if not doc.passages:
            logger.warning("⚠️ 跳过空文档: %s", doc_path.name)
            continue
        documents.append(doc)

    if not documents:
        raise InputError(f"簇 {root.name!r} 没有可用文档")

    query = None
    query_path = root / Layout.QUERY
    if query_path.is_file():
        query = " ".join(_read_text(query_path).split()) or None

    references: List[str] = []
    refs_dir = root / Layout.REFS_DIR
    if refs_dir.is_dir():
        for ref_path in _text_files(refs_dir):
            text = _read_text(ref_path).strip()
            if text:
                references.append(text)
            else:
                logger.warning("⚠️ 跳过空参考摘要: %s", ref_path.name)

    cluster = Cluster(
        id=root.name,
        documents=tuple(documents),
        query=query,
        references=tuple(references),
    )
    logger.debug(
        "簇 %s: %d 篇文档, %d 个段落, %d 篇参考摘要",
        cluster.id, len(cluster.documents), len(cluster.passages), len(cluster.references),
    )
    return cluster


def load_clusters(path: PathLike) -> List[Cluster]:
    """读取单个簇目录，或其下所有含 docs/ 的子目录（按目录名排序）。

    Raises:
        InputError: 路径不存在或其中没有簇
    """
    root = Path(path)
    if not root.is_dir():
        raise InputError(f"目录不存在: {root}")
    if (root / Layout.DOCS_DIR).is_dir():
        return [load_cluster(root)]
    clusters = [
        load_cluster(child)
        for child in sorted(root.iterdir())
        if child.is_dir() and (child / Layout.DOCS_DIR).is_dir()
    ]
    if not clusters:
        raise InputError(f"{root} 下没有找到簇目录（需包含 {Layout.DOCS_DIR}/）")
    return clusters
