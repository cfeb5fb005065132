#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
有限离散度量空间
Finite discrete metric spaces, the squares space {k²}, subsets and neighborhoods.

距离以 float64 精确存储；本库生成的空间都是整数值的，
因此所有比较都是精确的，容差 1e-9 只用于用户提供的浮点度量。
所有对象构造后不可变，可在线程间只读共享。
"""

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    EmptySpaceError,
    EmptySubsetError,
    FarPairsExhaustedError,
    MetricViolationError,
    PreconditionError,
    ShapeError,
)
from .minplus import min_plus_argmin

FLOAT_TOLERANCE = 1e-9

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class PointId:
    """多副本空间中的点：copy=0 为基本副本 X_0，index 为副本内位置"""
    copy: int
    index: int

    def __post_init__(self):
        if self.copy < 0 or self.index < 0:
            raise PreconditionError(f"PointId 分量必须非负: {self}")


@dataclass(frozen=True)
class MetricVerdict:
    """度量公理检查结果；kind 为第一个违反项的类别"""
    is_valid: bool
    kind: Optional[str] = None
    location: Tuple[int, ...] = ()
    message: str = "valid"


def is_integer_valued(matrix: np.ndarray) -> bool:
    matrix = np.asarray(matrix)
    return bool(np.all(np.isfinite(matrix)) and np.all(matrix == np.round(matrix)))


def validate_metric(matrix, tol: Optional[float] = None) -> MetricVerdict:
    """
    检查度量公理：零对角、对称、非对角为正、三角不等式

    Args:
        matrix: 方阵
        tol: 容差；为 None 时整数值矩阵取 0，否则取 1e-9

    Returns:
        MetricVerdict: 通过时 is_valid=True，否则给出第一个违反位置
    """
    dist = np.asarray(matrix, dtype=np.float64)
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise ShapeError(f"度量矩阵必须是方阵，实际形状 {dist.shape}")
    size = dist.shape[0]
    if size == 0:
        return MetricVerdict(True)

    if not np.all(np.isfinite(dist)):
        i, j = (int(v) for v in np.argwhere(~np.isfinite(dist))[0])
        return MetricVerdict(False, 'non-finite', (i, j), f"non-finite distance at ({i},{j})")

    if tol is None:
        tol = 0.0 if is_integer_valued(dist) else FLOAT_TOLERANCE

    negative = np.argwhere(dist < -tol)
    if negative.size:
        i, j = (int(v) for v in negative[0])
        return MetricVerdict(False, 'negative', (i, j), f"negative distance at ({i},{j}): {dist[i, j]}")

    diagonal = np.flatnonzero(np.abs(np.diag(dist)) > tol)
    if diagonal.size:
        i = int(diagonal[0])
        return MetricVerdict(False, 'diagonal', (i, i), f"non-zero diagonal at ({i},{i}): {dist[i, i]}")

    asymmetric = np.argwhere(np.abs(dist - dist.T) > tol)
    if asymmetric.size:
        i, j = (int(v) for v in asymmetric[0])
        return MetricVerdict(False, 'asymmetry', (i, j),
                             f"asymmetry at ({i},{j}): {dist[i, j]} != {dist[j, i]}")

    off_diagonal = ~np.eye(size, dtype=bool)
    non_positive = np.argwhere(off_diagonal & (dist <= tol))
    if non_positive.size:
        i, j = (int(v) for v in non_positive[0])
        return MetricVerdict(False, 'positivity', (i, j), f"zero distance between distinct points ({i},{j})")

    shortest, witness = min_plus_argmin(dist, dist)
    broken = np.argwhere(dist > shortest + tol)
    if broken.size:
        i, j = (int(v) for v in broken[0])
        k = int(witness[i, j])
        return MetricVerdict(
            False, 'triangle', (i, k, j),
            f"triangle {i}-{k}-{j}: {dist[i, j]:g} > {dist[i, k]:g}+{dist[k, j]:g}",
        )

    return MetricVerdict(True)


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """
    带标签的有限度量空间

    labels 为实数标签（例如 X=N² 的 k²）；matrix 为完整距离矩阵。
    kind='labels' 表示距离由标签差的绝对值给出，kind='matrix' 表示显式矩阵。
    """
    labels: Tuple[float, ...]
    matrix: np.ndarray = field(repr=False)
    kind: str = 'matrix'
    name: str = 'X'

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.float64)
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'labels', tuple(float(v) for v in self.labels))
        if matrix.shape != (len(self.labels), len(self.labels)):
            raise ShapeError(f"标签数 {len(self.labels)} 与矩阵形状 {matrix.shape} 不一致")

    @classmethod
    def from_labels(cls, labels: Sequence[float], name: str = 'X', validate: bool = True) -> "FiniteMetricSpace":
        """由实数标签构造空间，距离为 |l_i − l_j|"""
        values = np.asarray(labels, dtype=np.float64)
        if values.size == 0:
            raise EmptySpaceError("空间至少需要一个点")
        space = cls(tuple(values), np.abs(values[:, None] - values[None, :]), kind='labels', name=name)
        if validate:
            space.require_valid()
        return space

    @classmethod
    def from_matrix(cls, matrix, labels: Optional[Sequence[float]] = None, name: str = 'X',
                    validate: bool = True) -> "FiniteMetricSpace":
        """由显式距离矩阵构造空间；validate=True 时拒绝不满足度量公理的输入"""
        dist = np.asarray(matrix, dtype=np.float64)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise ShapeError(f"度量矩阵必须是方阵，实际形状 {dist.shape}")
        if dist.shape[0] == 0:
            raise EmptySpaceError("空间至少需要一个点")
        if labels is None:
            labels = range(dist.shape[0])
        space = cls(tuple(labels), dist, kind='matrix', name=name)
        if validate:
            space.require_valid()
        return space

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def diameter(self) -> float:
        return float(self.matrix.max()) if self.size else 0.0

    @property
    def integer_valued(self) -> bool:
        return is_integer_valued(self.matrix)

    @property
    def tolerance(self) -> float:
        return 0.0 if self.integer_valued else FLOAT_TOLERANCE

    def dist(self, i: int, j: int) -> float:
        return float(self.matrix[i, j])

    def index_of(self, label: float) -> int:
        """按标签查找点下标"""
        for i, value in enumerate(self.labels):
            if value == label:
                return i
        raise PreconditionError(f"空间中不存在标签 {label}")

    def validate(self) -> MetricVerdict:
        return validate_metric(self.matrix)

    def require_valid(self) -> None:
        verdict = self.validate()
        if not verdict.is_valid:
            raise MetricViolationError(f"度量无效: {verdict.message}", verdict)

    def same_metric(self, other: "FiniteMetricSpace") -> bool:
        return self.matrix.shape == other.matrix.shape and bool(np.array_equal(self.matrix, other.matrix))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return self.labels == other.labels and self.kind == other.kind and self.same_metric(other)

    def __hash__(self) -> int:
        return hash((self.labels, self.kind))


@dataclass(frozen=True)
class Subset:
    """空间的子集（点下标集合）"""
    space: FiniteMetricSpace
    members: FrozenSet[int]

    def __post_init__(self):
        members = frozenset(int(m) for m in self.members)
        outside = sorted(m for m in members if m < 0 or m >= self.space.size)
        if outside:
            raise PreconditionError(f"子集成员超出空间下标范围: {outside}")
        object.__setattr__(self, 'members', members)

    @classmethod
    def from_labels(cls, space: FiniteMetricSpace, labels: Iterable[float]) -> "Subset":
        return cls(space, frozenset(space.index_of(label) for label in labels))

    @property
    def indices(self) -> List[int]:
        return sorted(self.members)

    @property
    def labels(self) -> List[float]:
        return [self.space.labels[i] for i in self.indices]

    def is_empty(self) -> bool:
        return not self.members

    def union(self, other: "Subset") -> "Subset":
        if not self.space.same_metric(other.space):
            raise PreconditionError("子集属于不同空间")
        return Subset(self.space, self.members | other.members)

    def issubset(self, other: "Subset") -> bool:
        return self.members <= other.members

    def __len__(self) -> int:
        return len(self.members)


def squares_space(count: int) -> FiniteMetricSpace:
    """
    X = N² = {1, 4, 9, …, count²}，标准度量 |i² − j²|

    Args:
        count: 点数，至少为 1
    """
    if count < 1:
        raise EmptySpaceError(f"squares_space 需要 count ≥ 1，实际 {count}")
    squares = np.arange(1, count + 1, dtype=np.int64) ** 2
    dist = np.abs(squares[:, None] - squares[None, :])
    return FiniteMetricSpace(tuple(squares.astype(np.float64)), dist.astype(np.float64),
                             kind='labels', name='X')


def square_root_labels(space: FiniteMetricSpace) -> np.ndarray:
    """对 X=N² 型空间返回 k（标签为 k²）；标签不是完全平方时抛出 PreconditionError"""
    labels = np.asarray(space.labels)
    roots = np.rint(np.sqrt(np.maximum(labels, 0))).astype(np.int64)
    if not np.array_equal(roots.astype(np.float64) ** 2, labels) or np.any(roots < 1):
        raise PreconditionError("空间标签必须是正整数的平方")
    return roots


def distance_to_subset(space: FiniteMetricSpace, subset: Subset) -> np.ndarray:
    """d_X(x, A) 对所有 x"""
    if subset.is_empty():
        raise EmptySubsetError("到空集的距离无定义")
    return space.matrix[:, subset.indices].min(axis=1)


def neighborhood(space: FiniteMetricSpace, subset: Subset, k: float) -> Subset:
    """
    N_k(A) = {x : d_X(x, A) ≤ k}

    Args:
        space: 度量空间
        subset: 非空子集 A
        k: 非负半径
    """
    if k < 0:
        raise PreconditionError(f"邻域半径必须非负: {k}")
    distances = distance_to_subset(space, subset)
    members = np.flatnonzero(distances <= k + space.tolerance)
    return Subset(space, frozenset(int(m) for m in members))


def ball(space: FiniteMetricSpace, center: int, radius: float) -> Subset:
    """闭球 Ball(center, radius)；radius < 0 时为空集"""
    if radius < 0:
        return Subset(space, frozenset())
    return neighborhood(space, Subset(space, frozenset([center])), radius)


def far_pairs(space: FiniteMetricSpace, count: int) -> List[Tuple[int, int]]:
    """
    贪心选取两两不交的点对 (x_i, y_i)，满足 d(x_i, y_i) > i

    按下标升序扫描：对每个 i 取未使用的最小 x，再取与之配对的最小 y；
    若最小的 x 没有合格的 y，则继续尝试下一个 x。

    Args:
        space: 度量空间
        count: 所需点对数

    Returns:
        List[Tuple[int, int]]: 点对下标列表

    Raises:
        FarPairsExhaustedError: 贪心未能凑够 count 对，achieved 为贪心找到的数量（不一定是最大可达数量）
    """
    if count < 1:
        raise PreconditionError(f"far_pairs 需要 count ≥ 1，实际 {count}")

    used = np.zeros(space.size, dtype=bool)
    pairs: List[Tuple[int, int]] = []
    for i in range(1, count + 1):
        found = None
        for x in np.flatnonzero(~used):
            candidates = np.flatnonzero(~used & (space.matrix[x] > i))
            candidates = candidates[candidates > x]
            if candidates.size:
                found = (int(x), int(candidates[0]))
                break
        if found is None:
            raise FarPairsExhaustedError(
                f"贪心选取只找到 {len(pairs)} 个远点对，需要 {count}", achieved=len(pairs))
        used[list(found)] = True
        pairs.append(found)

    logger.debug(f"far_pairs: {len(pairs)} 对, 距离 {[space.dist(x, y) for x, y in pairs]}")
    return pairs
