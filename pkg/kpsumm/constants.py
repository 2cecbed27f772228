"""
常量定义
========

定义摘要流水线的默认参数、簇目录布局、距离名称与已发表的参考分数。

Sections:
    - 摘要默认值：预算字数、关键短语数量、MMR λ
    - 分句规则：缩写停止表
    - 停用词：包内默认表与校验和
    - 簇目录布局：docs/、manifest.tsv、query.txt、refs/
    - 策略与距离：CLI 名称到内部名称的映射
    - 退出码
    - 已发表分数：层级策略在 DUC 2007 / TAC 2009 上的 ROUGE 对照值
"""

from pathlib import Path

# ==================== 摘要默认值 ====================

#: 输出摘要字数预算（按原文空白分词计数）
DEFAULT_BUDGET_WORDS = 250

#: 融合后保留的全局关键短语数量 K
DEFAULT_KEYPHRASES = 40

#: 每篇文档抽取的候选关键短语数量（与 K 相同）
DEFAULT_PER_DOC_KEYPHRASES = 40

#: 关键短语最大长度（词元数）
MAX_KEYPHRASE_TOKENS = 3

#: MMR 默认 λ（相关性与多样性的折中）
DEFAULT_MMR_LAMBDA = 0.5

#: 洗牌试验默认随机种子
DEFAULT_SEED = 0

#: frac133 距离的 Minkowski 指数 (N = 1.(3))
FRAC133_P = 4.0 / 3.0

#: 裸 ``minkowski`` 距离（未给出 p）时使用的指数
DEFAULT_MINKOWSKI_P = 3.0

# ==================== 分句规则 ====================

#: 缩写停止表：句点紧跟这些词（不区分大小写、去掉末尾句点）时不切分
ABBREVIATIONS = frozenset([
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr",
    "vs", "etc", "approx",
    "u.s", "u.n", "u.k", "e.g", "i.e", "a.m", "p.m", "d.c",
])

#: 与普通英文单词同形的缩写（sat、sun、no、mar、wed ...），只在首字母大写时不切分
TITLE_CASE_ABBREVIATIONS = frozenset([
    "st", "mt", "ft",
    "gen", "gov", "sen", "rep", "rev", "lt", "col", "capt", "sgt", "cmdr",
    "adm", "maj", "pres", "supt", "hon",
    "inc", "corp", "co", "ltd", "bros", "dept", "univ", "assn",
    "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept",
    "oct", "nov", "dec",
    "mon", "tue", "tues", "wed", "thu", "thur", "thurs", "fri", "sat", "sun",
    "no", "vol", "fig", "ave", "blvd",
])

# ==================== 停用词 ====================

#: 包内默认停用词表
STOPWORDS_FILE = Path(__file__).resolve().parent / "data" / "stopwords_en.txt"

#: 默认停用词表的 SHA-256，读入时校验
STOPWORDS_SHA256 = "c181ccbea3eaba946f4d545c9ce35eb323a06c946dc37936a8ca648dd43eb425"

#: 覆盖停用词表路径的环境变量
ENV_STOPWORDS = "KPSUMM_STOPWORDS"

# ==================== 簇目录布局 ====================

class Layout:
    """簇目录布局。

    Attributes:
        DOCS_DIR: 文档目录，每个 UTF-8 文件一篇文档
        MANIFEST: 可选的时间清单，每行 ``filename<TAB>ISO-8601 日期``
        QUERY: 可选的单行查询
        REFS_DIR: 参考摘要目录
    """

    DOCS_DIR = "docs"
    MANIFEST = "manifest.tsv"
    QUERY = "query.txt"
    REFS_DIR = "refs"

    #: 文档与参考摘要的文件后缀
    TEXT_SUFFIX = ".txt"


# ==================== 策略与距离 ====================

#: 内部策略名称
SINGLE_LAYER = "single_layer"
WATERFALL = "waterfall"
CONCAT_BASELINE = "concat_baseline"
MMR = "mmr"
CENTROID = "centroid"

#: 全部策略
STRATEGIES = (SINGLE_LAYER, WATERFALL, CONCAT_BASELINE, MMR, CENTROID)

#: 层级/拼接策略（基于 KP-Centrality）
CENTRALITY_STRATEGIES = (SINGLE_LAYER, WATERFALL, CONCAT_BASELINE)

#: CLI 名称 → 内部策略名称
STRATEGY_ALIASES = {
    "single-layer": SINGLE_LAYER,
    "waterfall": WATERFALL,
    "concat": CONCAT_BASELINE,
    "mmr": MMR,
    "centroid": CENTROID,
}

#: 内部策略名称 → CLI 名称（报告中使用）
STRATEGY_LABELS = {value: key for key, value in STRATEGY_ALIASES.items()}

#: 默认策略与距离
DEFAULT_STRATEGY = WATERFALL
DEFAULT_DISTANCE = "cosine"

#: bench 子命令默认网格
BENCH_STRATEGIES = ("single-layer", "waterfall", "concat", "centroid", "mmr")
BENCH_DISTANCES = ("cosine", "frac133")

# ==================== 退出码 ====================

class ExitCode:
    """CLI 退出码（稳定约定）。"""

    OK = 0
    INPUT_ERROR = 1
    USAGE_ERROR = 2


# ==================== 已发表分数 ====================

#: (数据集, CLI 策略名, 距离名, 是否洗牌) → (R1, R2)
#:
#: 诊断用途：关键短语抽取器与 ROUGE 配置均不同，不作通过/失败判定。
PUBLISHED_SCORES = {
    ("duc2007", "concat", "frac133", False): (0.3565, 0.0744),
    ("duc2007", "concat", "cosine", False): (0.3406, 0.0670),
    ("duc2007", "waterfall", "frac133", False): (0.3569, 0.0765),
    ("duc2007", "single-layer", "frac133", False): (0.3775, 0.0882),
    ("duc2007", "waterfall", "cosine", False): (0.3701, 0.0904),
    ("duc2007", "single-layer", "cosine", False): (0.3707, 0.0822),
    ("duc2007", "single-layer", "frac133", True): (0.3689, 0.0807),
    ("duc2007", "waterfall", "cosine", True): (0.3626, 0.0844),
    ("tac2009", "concat", "frac133", False): (0.4706, 0.1268),
    ("tac2009", "concat", "cosine", False): (0.4746, 0.1391),
    ("tac2009", "waterfall", "frac133", False): (0.4943, 0.1441),
    ("tac2009", "single-layer", "frac133", False): (0.4983, 0.1526),
    ("tac2009", "waterfall", "cosine", False): (0.5137, 0.1693),
    ("tac2009", "single-layer", "cosine", False): (0.4993, 0.1590),
    ("tac2009", "single-layer", "frac133", True): (0.5060, 0.1483),
    ("tac2009", "waterfall", "cosine", True): (0.5107, 0.1630),
}

#: 已发表分数覆盖的数据集
PUBLISHED_DATASETS = ("duc2007", "tac2009")
