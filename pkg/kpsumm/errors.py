"""
异常定义
========

CLI 将 :class:`KpSummError` 的子类映射为退出码 1；参数范围错误直接抛出
``ValueError``（退出码 2 由 argparse 负责）。
"""


class KpSummError(Exception):
    """kpsumm 错误基类。"""


class InputError(KpSummError, ValueError):
    """输入数据错误：缺少目录、文件不可读、格式不符或内容为空。"""


class DomainError(KpSummError, ValueError):
    """领域前置条件不满足，例如零质量向量的 Jensen-Shannon 散度、无查询的 MMR。"""
