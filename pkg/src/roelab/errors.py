#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
异常定义 - roelab 统一异常层次
Exception hierarchy shared by all roelab modules.

所有库函数抛出的异常都派生自 RoeLabError；
输入值类错误同时派生自 ValueError，便于调用方按惯例捕获。
"""

from typing import Any, Optional, Tuple


class RoeLabError(Exception):
    """roelab 异常基类"""


class ConfigurationError(RoeLabError):
    """配置加载或验证失败"""


class ShapeError(RoeLabError, ValueError):
    """矩阵/算子形状不匹配"""


class EmptySpaceError(RoeLabError, ValueError):
    """空度量空间"""


class EmptySubsetError(RoeLabError, ValueError):
    """空子集（到空集的距离无定义）"""


class PreconditionError(RoeLabError, ValueError):
    """操作前置条件不满足"""


class MetricViolationError(RoeLabError, ValueError):
    """度量公理被违反"""

    def __init__(self, message: str, verdict: Any = None):
        super().__init__(message)
        self.verdict = verdict


class DegenerateEmbeddingError(RoeLabError, ValueError):
    """嵌入坐标使两个不同的点重合"""


class PointSetMismatchError(RoeLabError, ValueError):
    """两个度量不在同一点集上"""


class MetricDomainError(RoeLabError, ValueError):
    """算子支撑超出度量的定义域"""


class PartitionError(RoeLabError, ValueError):
    """划分有重叠或未覆盖全集"""


class ExhaustionError(RoeLabError, ValueError):
    """可用数据不足以构造所需对象"""


class FarPairsExhaustedError(ExhaustionError):
    """空间不足以容纳所需数量的远点对"""

    def __init__(self, message: str, achieved: int):
        super().__init__(message)
        self.achieved = achieved


class ConvergenceError(RoeLabError):
    """迭代在上限内未收敛"""

    def __init__(self, message: str, last_iterate: Any = None, residual: float = float("nan")):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


class UnknownScenarioError(RoeLabError, ValueError):
    """未知场景名"""


class InvalidParameterError(RoeLabError, ValueError):
    """场景参数无效（用法错误，退出码 2）"""


class CapExceededError(InvalidParameterError):
    """参数超出桌面规模上限"""


class ParseError(RoeLabError, ValueError):
    """文件解析失败"""

    def __init__(self, message: str, location: Optional[Tuple[int, int]] = None):
        if location is not None:
            message = f"{message} (行 {location[0]}, 列 {location[1]})"
        super().__init__(message)
        self.location = location
