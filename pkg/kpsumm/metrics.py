"""
距离度量模块
============

以统一接口提供七种距离/相似度：cosine、euclidean、manhattan、chebyshev、
minkowski(p)、frac133（p = 4/3 的 Minkowski）与 Jensen-Shannon 散度。

相似度约定：
    - cosine：返回 cos(u, v)，非负向量上位于 [0, 1]；零向量的余弦相似度为 0
      （距离为 1）。
    - 其余距离度量：返回 ``-distance(u, v)``，因此“相似度高于阈值”等价于
      “距离低于阈值”。

Jensen-Shannon 散度使用自然对数，输入先做 L1 归一化，取值范围 [0, ln 2]。

Example:
    .. code-block:: python

        from kpsumm.metrics import parse_metric, distance

        frac133 = parse_metric("frac133")
        distance(frac133, [1.0, 1.0], [0.0, 0.0])   # 1.6817...
"""

from dataclasses import dataclass
from typing import Optional
import math

import numpy as np
from scipy.spatial.distance import cdist

from .constants import DEFAULT_MINKOWSKI_P, FRAC133_P
from .errors import DomainError

COSINE = "cosine"
EUCLIDEAN = "euclidean"
MANHATTAN = "manhattan"
CHEBYSHEV = "chebyshev"
MINKOWSKI = "minkowski"
FRAC133 = "frac133"
JENSEN_SHANNON = "jensen_shannon"

#: 全部度量名称
METRIC_NAMES = (COSINE, EUCLIDEAN, MANHATTAN, CHEBYSHEV, MINKOWSKI, FRAC133, JENSEN_SHANNON)

# 度量名称 → scipy cdist 名称
_CDIST_NAMES = {
    COSINE: "cosine",
    EUCLIDEAN: "euclidean",
    MANHATTAN: "cityblock",
    CHEBYSHEV: "chebyshev",
    MINKOWSKI: "minkowski",
    FRAC133: "minkowski",
    JENSEN_SHANNON: "jensenshannon",
}

_ALIASES = {
    "js": JENSEN_SHANNON,
    "jsd": JENSEN_SHANNON,
    "jensen-shannon": JENSEN_SHANNON,
    "cityblock": MANHATTAN,
}


@dataclass(frozen=True)
class MetricId:
    """距离度量标识。

    Attributes:
        name: 度量名称，见 :data:`METRIC_NAMES`
        p: 仅 minkowski 使用的指数（> 0）
    """

    name: str
    p: Optional[float] = None

    def __post_init__(self):
        if self.name not in METRIC_NAMES:
            raise ValueError(f"未知的距离度量: {self.name!r}，可选: {', '.join(METRIC_NAMES)}")
        if self.name == MINKOWSKI:
            if self.p is None or not self.p > 0 or math.isinf(self.p):
                raise ValueError(f"minkowski 的指数 p 必须是有限正数，当前收到: {self.p!r}")
        elif self.p is not None:
            raise ValueError(f"{self.name} 不接受指数 p")

    @property
    def exponent(self) -> Optional[float]:
        """Minkowski 族的指数；frac133 为 4/3，其它度量为 None。"""
        if self.name == FRAC133:
            return FRAC133_P
        if self.name == EUCLIDEAN:
            return 2.0
        if self.name == MANHATTAN:
            return 1.0
        return self.p

    @property
    def is_cosine(self) -> bool:
        """是否为余弦相似度。"""
        return self.name == COSINE

    def __str__(self) -> str:
        if self.name == MINKOWSKI:
            return f"minkowski:{self.p:g}"
        if self.name == JENSEN_SHANNON:
            return "js"
        return self.name


def parse_metric(text: str) -> MetricId:
    """解析 CLI 距离名称。

    接受 ``cosine | euclidean | manhattan | chebyshev | frac133 | js |
    minkowski | minkowski:<p>``；裸 ``minkowski`` 取 p = 3。

    Raises:
        ValueError: 名称未知或 p 无法解析
    """
    value = (text or "").strip().lower()
    name, _, param = value.partition(":")
    name = _ALIASES.get(name, name)
    if name == MINKOWSKI:
        try:
            p = float(param) if param else DEFAULT_MINKOWSKI_P
        except ValueError:
            raise ValueError(f"无法解析 minkowski 指数: {param!r}") from None
        return MetricId(MINKOWSKI, p)
    if param:
        raise ValueError(f"{name} 不接受参数: {text!r}")
    return MetricId(name)


def pairwise_distances(metric: MetricId, a, b) -> np.ndarray:
    """批量距离矩阵，``result[i, j] = distance(metric, a[i], b[j])``。

    Args:
        metric: 距离度量
        a: 形状 (m, T) 的向量组
        b: 形状 (n, T) 的向量组

    Returns:
        np.ndarray: 形状 (m, n) 的非负距离矩阵

    Raises:
        DomainError: Jensen-Shannon 遇到 L1 质量为零的向量
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    cdist_name = _CDIST_NAMES[metric.name]

    if metric.name == JENSEN_SHANNON:
        if (a.sum(axis=1) <= 0).any() or (b.sum(axis=1) <= 0).any():
            raise DomainError("Jensen-Shannon 散度要求向量的 L1 质量为正")
        distances = cdist(a, b, cdist_name) ** 2
    elif metric.name == COSINE:
        with np.errstate(divide="ignore", invalid="ignore"):
            distances = cdist(a, b, cdist_name)
        # 零向量与任何向量的余弦距离为 1
        distances[~a.any(axis=1), :] = 1.0
        distances[:, ~b.any(axis=1)] = 1.0
        distances = np.clip(distances, 0.0, 2.0)
    elif cdist_name == "minkowski":
        distances = cdist(a, b, cdist_name, p=metric.exponent)
    else:
        distances = cdist(a, b, cdist_name)
    return np.maximum(distances, 0.0)


def pairwise_similarities(metric: MetricId, a, b) -> np.ndarray:
    """批量相似度矩阵：cosine 为 cos，其余为负距离。"""
    distances = pairwise_distances(metric, a, b)
    if metric.is_cosine:
        return 1.0 - distances
    return -distances


def distance(metric: MetricId, u, v) -> float:
    """两个向量之间的距离（非负）。

    Example:
        >>> distance(MetricId(MANHATTAN), [0, 0], [1, 2])
        3.0
    """
    return float(pairwise_distances(metric, [u], [v])[0, 0])


def similarity(metric: MetricId, u, v) -> float:
    """两个向量之间的相似度：cosine 返回 cos(u, v)，其余返回 ``-distance``。

    Example:
        >>> similarity(MetricId(EUCLIDEAN), [0, 0], [3, 4])
        -5.0
    """
    return float(pairwise_similarities(metric, [u], [v])[0, 0])


def distance_to_similarity(metric: MetricId, value: float) -> float:
    """将距离值换算为同一度量下的相似度阈值。"""
    return 1.0 - value if metric.is_cosine else -value
