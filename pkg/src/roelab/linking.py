#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
不交并上的度量
Metrics on X⊔Y and X⊔(X×{1..N}): construction, validation, the inverse-semigroup
operations on linking metrics, l_1 embeddings of the squares space and
coarse-distortion profiles.

两个副本之间的度量只需给出跨副本距离块 W[x, y] = d(x_0, y_1)。
所有运算只用 min 与 +，在整数值度量上结果与求值顺序无关。
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from .errors import (
    DegenerateEmbeddingError,
    EmptySubsetError,
    MetricViolationError,
    PointSetMismatchError,
    PreconditionError,
    ShapeError,
)
from .minplus import min_plus_product
from .space import (
    FLOAT_TOLERANCE,
    FiniteMetricSpace,
    MetricVerdict,
    PointId,
    Subset,
    is_integer_valued,
    validate_metric,
)

logger = logging.getLogger(__name__)

DEFAULT_VALIDATION_LIMIT = 2048

CrossPair = Tuple[PointId, PointId]


class LinkingKind(Enum):
    """跨副本距离块的来源"""
    UNIT = "unit"
    ZERO = "zero"
    DA = "dA"
    POINT = "point"
    CUSTOM = "custom"
    COMPOSED = "composed"
    ADJOINT = "adjoint"


class MultiCopyRule(Enum):
    """X⊔(X×{1..N}) 上的度量规则"""
    D0 = "d0"
    D1 = "d1"
    EMBEDDING = "embed"


def _tolerance_for(matrix: np.ndarray) -> float:
    return 0.0 if is_integer_valued(matrix) else FLOAT_TOLERANCE


@dataclass(frozen=True, eq=False)
class LinkingMetric:
    """
    X_0⊔Y_1 上的度量：左右两块各自的度量加跨副本距离块

    cross[x, y] = d(x_0, y_1)；公式型度量在 params 中保留其参数以便重新求值。
    """
    left: FiniteMetricSpace
    right: FiniteMetricSpace
    cross: np.ndarray = field(repr=False)
    kind: LinkingKind = LinkingKind.CUSTOM
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        cross = np.array(self.cross, dtype=np.float64)
        if cross.shape != (self.left.size, self.right.size):
            raise ShapeError(f"跨副本块形状 {cross.shape} 与空间大小 "
                             f"({self.left.size}, {self.right.size}) 不一致")
        cross.setflags(write=False)
        object.__setattr__(self, 'cross', cross)

    @property
    def is_square(self) -> bool:
        return self.cross.shape[0] == self.cross.shape[1]

    def full_matrix(self) -> np.ndarray:
        """完整 (n+m)×(n+m) 距离矩阵，左块在前"""
        return np.block([[self.left.matrix, self.cross], [self.cross.T, self.right.matrix]])

    def distance(self, p: PointId, q: PointId) -> float:
        if p.copy == q.copy:
            space = self.left if p.copy == 0 else self.right
            return space.dist(p.index, q.index)
        if p.copy == 0:
            return float(self.cross[p.index, q.index])
        return float(self.cross[q.index, p.index])

    def right_index(self, column: int) -> int:
        """跨副本块的列号对应的右侧原始下标（限制到子集后的度量保留原始下标）"""
        mapping = self.params.get('right_indices')
        return int(mapping[column]) if mapping is not None else column

    def validate(self) -> MetricVerdict:
        return validate_metric(self.full_matrix())

    def require_valid(self) -> None:
        verdict = self.validate()
        if not verdict.is_valid:
            raise MetricViolationError(f"跨副本度量无效: {verdict.message}", verdict)

    def restrict_right(self, members: Iterable[int]) -> "LinkingMetric":
        """把右侧限制到子集 Y_1 ⊂ Y（保留原始下标以便比较支撑）"""
        indices = sorted(int(m) for m in members)
        if not indices:
            raise EmptySubsetError("右侧子集为空")
        original = [self.right_index(i) for i in indices]
        right = FiniteMetricSpace(
            tuple(self.right.labels[i] for i in indices),
            self.right.matrix[np.ix_(indices, indices)],
            kind=self.right.kind, name=self.right.name,
        )
        params = dict(self.params)
        params['right_indices'] = tuple(original)
        return LinkingMetric(self.left, right, self.cross[:, indices], self.kind, params)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinkingMetric):
            return NotImplemented
        return (self.left == other.left and self.right == other.right
                and bool(np.array_equal(self.cross, other.cross)))

    __hash__ = None


def build_linking(base: FiniteMetricSpace, kind: Union[str, LinkingKind], *,
                  u: Optional[int] = None, subset: Optional[Subset] = None,
                  cross: Optional[np.ndarray] = None, validate: bool = True) -> LinkingMetric:
    """
    构造 X_0⊔X_1（或 X⊔{y_0}）上的跨副本度量

    Args:
        base: 基本空间 X
        kind: unit | zero | dA | point | custom
        u: zero / point 的基点下标
        subset: dA 的子集 A
        cross: custom 的跨副本块 W

    Returns:
        LinkingMetric: 已通过完整矩阵度量检查的跨副本度量
    """
    kind = LinkingKind(kind)
    dist = base.matrix
    right = base
    params: Dict[str, Any] = {}

    if kind == LinkingKind.UNIT:
        block = dist + 1.0
    elif kind == LinkingKind.ZERO:
        if u is None or not 0 <= u < base.size:
            raise PreconditionError(f"zero 度量需要有效基点 u，实际 {u}")
        block = dist[:, u, None] + dist[None, u, :] + 1.0
        params['u'] = int(u)
    elif kind == LinkingKind.DA:
        if subset is None or subset.is_empty():
            raise EmptySubsetError("d^A 需要非空子集 A")
        members = subset.indices
        block = min_plus_product(dist[:, members], dist[members, :]) + 1.0
        params['A'] = tuple(members)
    elif kind == LinkingKind.POINT:
        if u is None or not 0 <= u < base.size:
            raise PreconditionError(f"单点度量需要有效基点 u，实际 {u}")
        right = FiniteMetricSpace.from_labels([0.0], name='Y', validate=False)
        block = dist[:, u, None] + 1.0
        params['u'] = int(u)
    elif kind == LinkingKind.CUSTOM:
        if cross is None:
            raise PreconditionError("custom 度量需要跨副本块 W")
        block = np.asarray(cross, dtype=np.float64)
        if block.shape != (base.size, base.size):
            raise ShapeError(f"custom 跨副本块形状 {block.shape} 与空间大小 {base.size} 不一致")
    else:
        raise PreconditionError(f"build_linking 不支持的类型: {kind.value}")

    metric = LinkingMetric(base, right, block, kind, params)
    if validate:
        metric.require_valid()
    logger.debug(f"构造跨副本度量 {kind.value}, 大小 {metric.cross.shape}")
    return metric


def _require_same_base(*metrics: LinkingMetric) -> None:
    reference = metrics[0].left
    for metric in metrics:
        if not metric.is_square:
            raise ShapeError("跨副本块必须是方阵（Y = X 情形）")
        if not (metric.left.same_metric(reference) and metric.right.same_metric(reference)):
            raise ShapeError("两个跨副本度量的基本空间不一致")


def compose(d1: LinkingMetric, d2: LinkingMetric, validate: bool = True) -> LinkingMetric:
    """
    度量的合成 d1·d2：(d1 d2)(x_0, z_1) = min_y [d2(x_0, y_1) + d1(y_0, z_1)]

    即跨副本块的 (min, +) 乘积 d2.cross ⊗ d1.cross。
    """
    _require_same_base(d1, d2)
    block = min_plus_product(d2.cross, d1.cross)
    metric = LinkingMetric(d1.left, d1.right, block, LinkingKind.COMPOSED)
    if validate:
        metric.require_valid()
    return metric


def adjoint(d: LinkingMetric) -> LinkingMetric:
    """伴随度量 d*(x_0, y_1) = d(y_0, x_1)，即跨副本块转置"""
    if not d.is_square:
        raise ShapeError(f"伴随需要方形跨副本块，实际 {d.cross.shape}")
    return LinkingMetric(d.right, d.left, d.cross.T, LinkingKind.ADJOINT)


def idempotent_evidence(d: LinkingMetric) -> Tuple["DistortionProfile", "DistortionProfile"]:
    """
    s·s*·s 与 s 之间的有限尺度畸变证据（两个方向的畸变剖面）

    仅给出数值证据，不断言粗等价。
    """
    sss = compose(compose(d, adjoint(d)), d)
    return (distortion_profile(d.full_matrix(), sss.full_matrix()),
            distortion_profile(sss.full_matrix(), d.full_matrix()))


@dataclass(frozen=True, eq=False)
class EmbeddingCoordinates:
    """
    多副本空间的 l_1 嵌入坐标

    coords[(n, k)] 为点 x^k_n 的稀疏坐标 ((slot, value), …)，n = 0..nmax，k = 1..kmax。
    """
    kind: str
    kmax: int
    nmax: int
    coords: Dict[Tuple[int, int], Tuple[Tuple[int, float], ...]] = field(repr=False)

    @property
    def slot_count(self) -> int:
        return 1 + max((slot for vector in self.coords.values() for slot, _ in vector), default=0)

    def dense(self, copies: Optional[int] = None) -> np.ndarray:
        """按副本优先顺序排列的坐标矩阵，形状 ((copies+1)·kmax, slot_count)"""
        copies = self.nmax if copies is None else copies
        rows = np.zeros(((copies + 1) * self.kmax, self.slot_count))
        for n in range(copies + 1):
            for k in range(1, self.kmax + 1):
                for slot, value in self.coords[(n, k)]:
                    rows[n * self.kmax + k - 1, slot] += value
        return rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbeddingCoordinates):
            return NotImplemented
        return (self.kind, self.kmax, self.nmax, self.coords) == (other.kind, other.kmax, other.nmax, other.coords)

    __hash__ = None


def embedding_coords(kind: str, kmax: int, nmax: int, phi=None) -> EmbeddingCoordinates:
    """
    X=N² 多副本空间的三种 l_1 嵌入

    - ex10: k ≥ n 时 x^k_n = (k², …, 1 位于第 n 位)；k < n 时放在第 n 条射线上，坐标 k²+n
    - ex12: k < n 时 (k², …, 1 位于第 n 位)；k ≥ n 时 (k²−n, …, n+1 位于第 n 位)（按公式原样实现）
    - ex14: (k²−φ(k), …, φ(k) 位于第 n 位)，需要 φ(k) ≤ k
    副本 0 总是 (k², 0, 0, …)。

    Args:
        kind: ex10 | ex12 | ex14
        kmax: 每个副本的点数
        nmax: 副本数 N
        phi: ex14 使用的 PhiMap（或可调用对象）
    """
    if kmax < 1 or nmax < 1:
        raise PreconditionError(f"kmax 与 nmax 必须 ≥ 1，实际 ({kmax}, {nmax})")
    if kind not in ('ex10', 'ex12', 'ex14'):
        raise PreconditionError(f"未知嵌入类型: {kind}")
    if kind == 'ex14':
        if phi is None:
            raise PreconditionError("ex14 需要映射 φ")
        for k in range(1, kmax + 1):
            if phi(k) > k:
                raise PreconditionError(f"φ({k}) = {phi(k)} > {k}")

    coords: Dict[Tuple[int, int], Tuple[Tuple[int, float], ...]] = {}
    for k in range(1, kmax + 1):
        coords[(0, k)] = ((0, float(k * k)),)
    for n in range(1, nmax + 1):
        for k in range(1, kmax + 1):
            square = k * k
            if kind == 'ex10':
                if k >= n:
                    vector = ((0, float(square)), (n, 1.0))
                else:
                    vector = ((n, float(square + n)),)
            elif kind == 'ex12':
                if k < n:
                    vector = ((0, float(square)), (n, 1.0))
                else:
                    vector = ((0, float(square - n)), (n, float(n + 1)))
            else:
                value = int(phi(k))
                vector = ((0, float(square - value)), (n, float(value)))
            coords[(n, k)] = tuple((slot, v) for slot, v in vector if v != 0.0)
    return EmbeddingCoordinates(kind, kmax, nmax, coords)


@dataclass(frozen=True, eq=False)
class MultiCopySpace:
    """
    X⊔(X×{1..N}) 上的度量，点按副本优先排列：平铺下标 = copy·|X| + index

    d0/d1 按公式逐块求值，只在需要时构造完整矩阵。
    """
    base: FiniteMetricSpace
    copies: int
    rule: MultiCopyRule
    coords: Optional[EmbeddingCoordinates] = None

    @property
    def size(self) -> int:
        return self.base.size

    @property
    def total_points(self) -> int:
        return (self.copies + 1) * self.base.size

    def flat_index(self, point: PointId) -> int:
        if point.copy > self.copies or point.index >= self.size:
            raise PreconditionError(f"点 {point} 不在多副本空间中")
        return point.copy * self.size + point.index

    def point_id(self, flat: int) -> PointId:
        return PointId(flat // self.size, flat % self.size)

    @cached_property
    def _coordinates(self) -> Optional[np.ndarray]:
        if self.coords is None:
            return None
        return self.coords.dense(self.copies)

    def _copy_rows(self, n: int) -> np.ndarray:
        return self._coordinates[n * self.size:(n + 1) * self.size]

    def block(self, n: int, m: int) -> np.ndarray:
        """副本 n 与副本 m 之间的距离块 (|X|×|X|)"""
        if not (0 <= n <= self.copies and 0 <= m <= self.copies):
            raise PreconditionError(f"副本下标越界: ({n}, {m})")
        if self.rule == MultiCopyRule.D1:
            return self.base.matrix + abs(n - m)
        if self.rule == MultiCopyRule.D0:
            return self.base.matrix + (1.0 if n != m else 0.0)
        return cdist(self._copy_rows(n), self._copy_rows(m), metric='cityblock')

    def cross_block(self, n: int) -> np.ndarray:
        """d(x_0, y_n)"""
        return self.block(0, n)

    def restriction(self, n: int) -> np.ndarray:
        return self.block(n, n)

    def stacked_cross(self) -> np.ndarray:
        """X_0 到 X_1⊔…⊔X_N 的距离，形状 (|X|, N·|X|)，列按副本优先"""
        return np.hstack([self.cross_block(n) for n in range(1, self.copies + 1)])

    @cached_property
    def _full(self) -> np.ndarray:
        if self.rule == MultiCopyRule.EMBEDDING:
            full = cdist(self._coordinates, self._coordinates, metric='cityblock')
        else:
            full = np.block([[self.block(n, m) for m in range(self.copies + 1)]
                             for n in range(self.copies + 1)])
        full.setflags(write=False)
        return full

    def full_matrix(self) -> np.ndarray:
        return self._full

    def distance(self, p: PointId, q: PointId) -> float:
        return float(self.block(p.copy, q.copy)[p.index, q.index])

    def validate(self) -> MetricVerdict:
        return validate_metric(self.full_matrix())


def build_multicopy(base: FiniteMetricSpace, copies: int, rule: Union[str, MultiCopyRule],
                    coords: Optional[EmbeddingCoordinates] = None,
                    validation_limit: int = DEFAULT_VALIDATION_LIMIT) -> MultiCopySpace:
    """
    构造 X⊔(X×{1..N}) 上的度量

    - d1: d(x_n, y_m) = d_X(x, y) + |n − m|
    - d0: d(x_n, y_m) = d_X(x, y) + 1（n ≠ m），同副本内为 d_X
    - embed: 由 l_1 嵌入坐标诱导

    点数不超过 validation_limit 时对完整矩阵做度量检查，超过时记录并跳过
    （d0/d1 是度量之和，嵌入度量由 l_1 诱导，退化性另行检查）。
    """
    if copies < 1:
        raise PreconditionError(f"副本数必须 ≥ 1，实际 {copies}")
    rule = MultiCopyRule(rule)

    if rule == MultiCopyRule.EMBEDDING:
        if coords is None:
            raise PreconditionError("embed 规则需要嵌入坐标")
        if coords.kmax != base.size or coords.nmax < copies:
            raise PreconditionError(
                f"嵌入坐标覆盖 (kmax={coords.kmax}, nmax={coords.nmax})，需要 ({base.size}, ≥{copies})")
    else:
        coords = None

    space = MultiCopySpace(base, copies, rule, coords)

    if rule == MultiCopyRule.EMBEDDING:
        rows = space._coordinates
        unique_rows, first, inverse = np.unique(rows, axis=0, return_index=True, return_inverse=True)
        if unique_rows.shape[0] < rows.shape[0]:
            inverse = np.asarray(inverse).reshape(-1)
            for flat, group in enumerate(inverse):
                if first[group] != flat:
                    raise DegenerateEmbeddingError(
                        f"嵌入使点 {space.point_id(int(first[group]))} 与 {space.point_id(flat)} 重合")
        if not np.array_equal(space.restriction(0), base.matrix):
            raise MetricViolationError("嵌入在 X_0 上的限制与 d_X 不一致")

    if space.total_points <= validation_limit:
        verdict = space.validate()
        if not verdict.is_valid:
            raise MetricViolationError(f"多副本度量无效: {verdict.message}", verdict)
    else:
        logger.warning(f"多副本空间共 {space.total_points} 点，超过 {validation_limit}，跳过完整矩阵检查")
    return space


@dataclass(frozen=True, eq=False)
class DistortionProfile:
    """
    经验粗控制函数 φ(t) = max{ d_B(p, q) : d_A(p, q) ≤ t }

    thresholds 为 d_A 的不同取值（升序），values 为对应的 φ。
    """
    thresholds: np.ndarray
    values: np.ndarray

    def __call__(self, t: float) -> float:
        return self.evaluate(t)

    def evaluate(self, t: float) -> float:
        position = int(np.searchsorted(self.thresholds, t, side='right')) - 1
        if position < 0:
            return 0.0
        return float(self.values[position])

    @property
    def is_monotone(self) -> bool:
        return bool(np.all(np.diff(self.values) >= 0))

    @property
    def maximum(self) -> float:
        return float(self.values[-1]) if self.values.size else 0.0


def _as_distance_matrix(metric) -> np.ndarray:
    if isinstance(metric, (LinkingMetric, MultiCopySpace)):
        return metric.full_matrix()
    if isinstance(metric, FiniteMetricSpace):
        return metric.matrix
    return np.asarray(metric, dtype=np.float64)


def distortion_profile(metric_a, metric_b) -> DistortionProfile:
    """
    两个同一点集上度量之间的畸变剖面（全点对枚举）

    Args:
        metric_a: 度量 A（矩阵、FiniteMetricSpace、LinkingMetric 或 MultiCopySpace）
        metric_b: 度量 B

    Returns:
        DistortionProfile: φ 在 d_A 各取值处的值
    """
    a = _as_distance_matrix(metric_a)
    b = _as_distance_matrix(metric_b)
    if a.shape != b.shape or a.ndim != 2:
        raise PointSetMismatchError(f"两个度量的点集不一致: {a.shape} vs {b.shape}")

    flat_a = a.ravel()
    order = np.argsort(flat_a, kind='stable')
    sorted_a = flat_a[order]
    running_max = np.maximum.accumulate(b.ravel()[order])
    thresholds = np.unique(sorted_a)
    last = np.searchsorted(sorted_a, thresholds, side='right') - 1
    return DistortionProfile(thresholds, running_max[last])


def allowed_mask(metric: Union[LinkingMetric, MultiCopySpace], L: float) -> np.ndarray:
    """跨副本块上 d ≤ L 的布尔掩码（多副本空间按 stacked_cross 的列序）"""
    if L < 0:
        raise PreconditionError(f"传播界必须非负: {L}")
    block = metric.cross if isinstance(metric, LinkingMetric) else metric.stacked_cross()
    return block <= L + _tolerance_for(block)


def allowed_support(metric: Union[LinkingMetric, MultiCopySpace], L: float,
                    copies: Optional[Iterable[int]] = None) -> FrozenSet[CrossPair]:
    """
    传播不超过 L 的算子可以占据的跨副本点对 {(x_0, y_n) : d(x_0, y_n) ≤ L}

    Args:
        metric: 跨副本度量或多副本空间
        L: 非负传播界
        copies: 仅对多副本空间有效，限制右侧副本集合
    """
    if L < 0:
        raise PreconditionError(f"传播界必须非负: {L}")
    pairs: List[CrossPair] = []
    if isinstance(metric, LinkingMetric):
        mask = metric.cross <= L + _tolerance_for(metric.cross)
        for x, column in zip(*np.nonzero(mask)):
            pairs.append((PointId(0, int(x)), PointId(1, metric.right_index(int(column)))))
        return frozenset(pairs)

    selected = range(1, metric.copies + 1) if copies is None else sorted(set(copies))
    for n in selected:
        block = metric.cross_block(n)
        mask = block <= L + _tolerance_for(block)
        for x, y in zip(*np.nonzero(mask)):
            pairs.append((PointId(0, int(x)), PointId(n, int(y))))
    return frozenset(pairs)


def dominates(metric_small, metric_large) -> bool:
    """逐点比较：metric_small ≤ metric_large"""
    a = _as_distance_matrix(metric_small)
    b = _as_distance_matrix(metric_large)
    if a.shape != b.shape:
        raise PointSetMismatchError(f"两个度量的点集不一致: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b))
