#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
显式构造
Explicit operators, maps and support laws: far-pair witnesses, the
multi-copy sequences (T_n), (S_n), neighborhood projections, φ maps and the
support laws of the d^A, d_1 and embedding metrics.

所有构造都是输入数据（PairList / PhiMap）的确定性函数；
随机性只出现在调用方传入的带种子生成器中。
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .config_manager import NormSettings
from .errors import EmptySubsetError, ExhaustionError, PreconditionError
from .hilbert import OperatorSequence, copy_space, sequence_inner_product
from .linking import (
    LinkingMetric,
    MultiCopySpace,
    allowed_support,
    build_linking,
    build_multicopy,
    embedding_coords,
)
from .operator import (
    BasisSpace,
    SparseOperator,
    diagonal_projection,
    from_entries,
    identity,
    max_abs_difference,
    multiply,
    operator_norm,
    random_finite_propagation,
    relabel,
    subtract,
)
from .space import (
    FiniteMetricSpace,
    PointId,
    Subset,
    ball,
    distance_to_subset,
    far_pairs,
    neighborhood,
    squares_space,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------- φ maps

@dataclass(frozen=True)
class PhiMap:
    """
    φ: {1..horizon} → N，values[k−1] = φ(k)

    name='ruler' 表示 φ(k) = 1 + v_2(k)（k 中 2 的幂次加一）。
    """
    values: Tuple[int, ...]
    name: str = field(default='custom', compare=False)

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if not values:
            raise PreconditionError("PhiMap 至少需要一个值")
        if min(values) < 1:
            raise PreconditionError("φ 的值必须是正整数")
        object.__setattr__(self, 'values', values)

    @classmethod
    def ruler(cls, horizon: int) -> "PhiMap":
        if horizon < 1:
            raise PreconditionError(f"horizon 必须 ≥ 1，实际 {horizon}")
        return cls(tuple(1 + ((k & -k).bit_length() - 1) for k in range(1, horizon + 1)), name='ruler')

    @property
    def horizon(self) -> int:
        return len(self.values)

    def __call__(self, k: int) -> int:
        if not 1 <= k <= self.horizon:
            raise PreconditionError(f"φ 在 k = {k} 处未定义（horizon {self.horizon}）")
        return self.values[k - 1]

    def indices_with_value(self, value: int, kmax: Optional[int] = None) -> List[int]:
        kmax = self.horizon if kmax is None else min(kmax, self.horizon)
        return [k for k in range(1, kmax + 1) if self.values[k - 1] == value]


@dataclass(frozen=True)
class PhiVerdict:
    is_valid: bool
    bound_violations: Tuple[int, ...] = ()
    repetition_failures: Tuple[int, ...] = ()
    counts: Dict[int, int] = field(default_factory=dict)


def phi_validate(phi: PhiMap, horizon: int, V: int) -> PhiVerdict:
    """
    检查 φ(k) ≤ k（k = 1..horizon）以及每个 v ≤ V 至少取到两次

    Returns:
        PhiVerdict: 不满足时给出反例 k 和取值不足的 v
    """
    if not 1 <= V <= horizon:
        raise PreconditionError(f"需要 horizon ≥ V ≥ 1，实际 horizon={horizon}, V={V}")
    if phi.horizon < horizon:
        raise PreconditionError(f"φ 只定义到 {phi.horizon}，需要 {horizon}")

    bound_violations = tuple(k for k in range(1, horizon + 1) if phi(k) > k)
    counts = {v: 0 for v in range(1, V + 1)}
    for k in range(1, horizon + 1):
        if phi(k) in counts:
            counts[phi(k)] += 1
    repetition_failures = tuple(v for v, count in counts.items() if count < 2)
    return PhiVerdict(not bound_violations and not repetition_failures,
                      bound_violations, repetition_failures, counts)


# ---------------------------------------------------------------- pair lists

@dataclass(frozen=True, eq=False)
class PairList:
    """两两不交的点对 (x_i, y_i)；带空间时记录距离"""
    pairs: Tuple[Tuple[int, int], ...]
    space: Optional[FiniteMetricSpace] = None

    def __post_init__(self):
        pairs = tuple((int(x), int(y)) for x, y in self.pairs)
        points = [p for pair in pairs for p in pair]
        if len(points) != len(set(points)):
            raise PreconditionError("点对之间必须两两不交")
        if self.space is not None and points and max(points) >= self.space.size:
            raise PreconditionError("点对下标超出空间范围")
        object.__setattr__(self, 'pairs', pairs)

    @classmethod
    def from_far_pairs(cls, space: FiniteMetricSpace, count: int) -> "PairList":
        return cls(tuple(far_pairs(space, count)), space)

    @property
    def distances(self) -> Tuple[float, ...]:
        if self.space is None:
            return ()
        return tuple(self.space.dist(x, y) for x, y in self.pairs)

    def points(self, upto: Optional[int] = None) -> List[int]:
        chosen = self.pairs if upto is None else self.pairs[:upto]
        return [p for pair in chosen for p in pair]

    def __len__(self) -> int:
        return len(self.pairs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PairList):
            return NotImplemented
        return self.pairs == other.pairs

    __hash__ = None


def _space_of(pairs: PairList, space: Optional[FiniteMetricSpace]) -> FiniteMetricSpace:
    space = space or pairs.space
    if space is None:
        raise PreconditionError("需要点对所在的空间")
    return space


def theorem2_witness(pairs: PairList, n: int, space: Optional[FiniteMetricSpace] = None) -> SparseOperator:
    """
    前 n 个远点对上的对称 0/1 部分置换 T^(n)

    T^(n)_{x,y} = 1 当 (x, y) ∈ {(x_i, y_i), (y_i, x_i) : i ≤ n}；n = 0 为零算子。
    """
    space = _space_of(pairs, space)
    if not 0 <= n <= len(pairs):
        raise PreconditionError(f"n = {n} 超出点对数 {len(pairs)}")
    basis = BasisSpace.of(space)
    entries = {}
    for x, y in pairs.pairs[:n]:
        entries[(x, y)] = 1.0
        entries[(y, x)] = 1.0
    return from_entries(basis, basis, entries)


def theorem2_union(pairs: PairList, space: Optional[FiniteMetricSpace] = None) -> SparseOperator:
    """全部 T^(n) 的逐元素并（有限尺度上的上确界）"""
    return theorem2_witness(pairs, len(pairs), space)


def distinct_subsequence(pairs: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """保留左右两端都第一次出现的点对"""
    seen_left, seen_right, kept = set(), set(), []
    for x, y in pairs:
        if x in seen_left or y in seen_right:
            continue
        seen_left.add(x)
        seen_right.add(y)
        kept.append((x, y))
    return kept


@dataclass(frozen=True)
class RepetitionEvidence:
    """同一左端点 x 重复出现时，两个度量下右端点之间的距离"""
    point: int
    occurrences: int
    spread_a: float
    bound_a: float
    spread_b_lower: float


def repetition_bound(d_a: np.ndarray, d_b: np.ndarray, pairs: Sequence[Tuple[int, int]],
                     C: float) -> List[RepetitionEvidence]:
    """
    左端点重复时的估计：若 d_a(x, y_i) ≤ C，则 d_a(y_i, y_1) ≤ 2C；
    而 d_b(y_i, y_1) ≥ d_b(x, y_i) − d_b(x, y_1)。

    Args:
        d_a, d_b: 同一点集上的完整距离矩阵，pairs 为其中的平铺下标
        C: d_a 在点对上的一致上界
    """
    d_a = np.asarray(d_a)
    d_b = np.asarray(d_b)
    groups: Dict[int, List[int]] = {}
    for x, y in pairs:
        groups.setdefault(int(x), []).append(int(y))

    evidence = []
    for x, partners in sorted(groups.items()):
        if len(partners) < 2:
            continue
        first = partners[0]
        spread_a = max(float(d_a[y, first]) for y in partners)
        spread_b = max(float(d_b[x, y] - d_b[x, first]) for y in partners)
        evidence.append(RepetitionEvidence(x, len(partners), spread_a, 2.0 * C, spread_b))
    return evidence


def prop4_witness(pairs: Sequence[Tuple[int, int]], domain: BasisSpace, codomain: BasisSpace) -> SparseOperator:
    """
    X → Y 的 0/1 算子，T_{x_n, y_n} = 1

    Raises:
        PreconditionError: 左端或右端有重复点（先调用 distinct_subsequence）
    """
    lefts = [int(x) for x, _ in pairs]
    rights = [int(y) for _, y in pairs]
    if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
        raise PreconditionError("点对序列中有重复点")
    return from_entries(domain, codomain, [(x, y, 1.0) for x, y in zip(lefts, rights)])


def multicopy_columns(space: MultiCopySpace, points: Iterable[PointId]) -> List[int]:
    """副本 n ≥ 1 中的点在堆叠值域 X_1⊔…⊔X_N 中的列号"""
    columns = []
    for point in points:
        if not 1 <= point.copy <= space.copies:
            raise PreconditionError(f"点 {point} 不在副本 1..{space.copies} 中")
        columns.append((point.copy - 1) * space.size + point.index)
    return columns


# ---------------------------------------------------------------- projections

def neighborhood_projection(space: FiniteMetricSpace, subset: Subset, k: float) -> SparseOperator:
    """到 l_2(N_k(A)) 的对角投影"""
    if subset.is_empty():
        raise EmptySubsetError("neighborhood_projection 需要非空子集 A")
    return diagonal_projection(BasisSpace.of(space), neighborhood(space, subset, k).members)


@dataclass(frozen=True)
class LadderStep:
    k: float
    covered: int
    complement_norm: float
    residual: float


def projection_ladder(space: FiniteMetricSpace, subset: Subset, radii: Iterable[float],
                      vector: Optional[np.ndarray] = None,
                      settings: Optional[NormSettings] = None) -> List[LadderStep]:
    """
    沿邻域半径阶梯比较 ‖(1 − P_k)ξ‖ 与 ‖1 − P_k‖

    ξ 默认为 X 上的均匀单位向量；前者随 k 趋于 0，后者在 N_k(A) ≠ X 时保持为 1。
    """
    basis = BasisSpace.of(space)
    if vector is None:
        vector = np.full(space.size, 1.0 / np.sqrt(space.size))
    vector = np.asarray(vector, dtype=np.complex128)
    one = identity(basis)

    steps = []
    for k in radii:
        projection = neighborhood_projection(space, subset, k)
        complement = subtract(one, projection)
        residual = float(np.linalg.norm(complement.matrix.T @ vector))
        steps.append(LadderStep(float(k), projection.nnz, operator_norm(complement, settings=settings), residual))
    return steps


# ---------------------------------------------------------------- multi-copy sequences

def theorem9_sequences(pairs: PairList, N: int, space: Optional[FiniteMetricSpace] = None,
                       all_pairs: bool = False) -> Tuple[OperatorSequence, OperatorSequence]:
    """
    序列 (T_n) 与 (S_n)

    T_n 把 x^n 与 y^n 交换并送入副本 n；S_n 是到 {x^n, y^n} 的对角投影（送入副本 n）。
    all_pairs=True 时 T_n 改为对所有 k ≤ N 的点对做交换（对照用）。

    Raises:
        PreconditionError: N 超出点对数，或 d(x^k, y^k) ≤ k
    """
    space = _space_of(pairs, space)
    if not 0 <= N <= len(pairs):
        raise PreconditionError(f"N = {N} 超出点对数 {len(pairs)}")
    for k, (x, y) in enumerate(pairs.pairs[:N], start=1):
        if space.dist(x, y) <= k:
            raise PreconditionError(f"第 {k} 个点对距离 {space.dist(x, y):g} 不大于 {k}")

    basis = BasisSpace.of(space)
    t_terms, s_terms = [], []
    for n in range(1, N + 1):
        target = copy_space(basis, n)
        swapped = pairs.pairs[:N] if all_pairs else [pairs.pairs[n - 1]]
        t_entries = [(x, y, 1.0) for x, y in swapped] + [(y, x, 1.0) for x, y in swapped]
        x, y = pairs.pairs[n - 1]
        t_terms.append(from_entries(basis, target, t_entries))
        s_terms.append(from_entries(basis, target, [(x, x, 1.0), (y, y, 1.0)]))
    return OperatorSequence(basis, tuple(t_terms)), OperatorSequence(basis, tuple(s_terms))


def theorem9_products(T: OperatorSequence, S: OperatorSequence) -> Dict[str, bool]:
    """
    逐项计算 T_n S_n、T_n² 并报告三个恒等式是否对所有 n 成立

    副本按 x_n ↦ x 识别，T_n S_n 表示先 S_n 再 T_n。
    """
    if len(T) != len(S):
        raise PreconditionError("两个序列长度不一致")
    holds = {"T_nS_n=T_n": True, "T_nS_n=S_n": True, "T_n^2=S_n": True}
    for t_term, s_term in zip(T.terms, S.terms):
        t_local = relabel(t_term, codomain=t_term.domain)
        s_local = relabel(s_term, codomain=s_term.domain)
        product = multiply(t_local, s_local)
        square = multiply(t_local, t_local)
        holds["T_nS_n=T_n"] &= max_abs_difference(product, t_local) == 0.0
        holds["T_nS_n=S_n"] &= max_abs_difference(product, s_local) == 0.0
        holds["T_n^2=S_n"] &= max_abs_difference(square, s_local) == 0.0
    return holds


def prefix_entry_identity(S: OperatorSequence, T: OperatorSequence, pairs: PairList, N: int) -> List[complex]:
    """(Σ_{n ≤ N} ⟨S_n, T_n⟩)_{x^n, y^n}，n = 1..N"""
    total = sequence_inner_product(S, T, N)
    return [total.entry(x, y) for x, y in pairs.pairs[:N]]


def tail_compression_norm(seq: OperatorSequence, N: int, M: int, pairs: PairList,
                          settings: Optional[NormSettings] = None) -> float:
    """‖S'_N P_M‖：P_M 投影到前 M 个点对的点上；N ≥ M 时为 0"""
    if not 0 <= M <= len(pairs):
        raise PreconditionError(f"M = {M} 超出点对数 {len(pairs)}")
    projection = diagonal_projection(seq.domain, pairs.points(M))
    return operator_norm(multiply(seq.tail(N).stack(), projection), settings=settings)


# ---------------------------------------------------------------- X = N² decompositions

def diagonal_parts(seq: OperatorSequence) -> OperatorSequence:
    """D_n：T_n 的对角部分 (T_n)_{x_0, x_n}"""
    terms = []
    for term in seq.terms:
        rows, cols = term.support()
        on_diagonal = rows == cols
        values = np.asarray(term.matrix[rows[on_diagonal], cols[on_diagonal]]).ravel()
        terms.append(from_entries(term.domain, term.codomain,
                                  list(zip(rows[on_diagonal].tolist(), cols[on_diagonal].tolist(), values))))
    return OperatorSequence(seq.domain, tuple(terms))


def corner_parts(seq: OperatorSequence, L: int) -> OperatorSequence:
    """K_n = P_L (T_n − D_n) P_L，P_L 投影到前 L 个点"""
    diagonal = diagonal_parts(seq)
    terms = []
    for term, part in zip(seq.terms, diagonal.terms):
        rows, cols = subtract(term, part).support()
        inside = (rows < L) & (cols < L)
        values = np.asarray(term.matrix[rows[inside], cols[inside]]).ravel()
        terms.append(from_entries(term.domain, term.codomain,
                                  list(zip(rows[inside].tolist(), cols[inside].tolist(), values))))
    return OperatorSequence(seq.domain, tuple(terms))


def example14_metric(phi: PhiMap, kmax: int, nmax: int, **kwargs) -> MultiCopySpace:
    """X = N² 上由 φ 嵌入诱导的多副本度量 b"""
    coords = embedding_coords('ex14', kmax, nmax, phi=phi)
    return build_multicopy(squares_space(kmax), nmax, 'embed', coords, **kwargs)


def phi_one_indices(phi: PhiMap, kmax: int, count: int) -> List[int]:
    """前 count 个满足 φ(k) = 1 的 k ≤ kmax"""
    indices = phi.indices_with_value(1, kmax)
    if len(indices) < count:
        raise ExhaustionError(f"k ≤ {kmax} 中只有 {len(indices)} 个 φ(k) = 1，需要 {count}")
    return indices[:count]


def example14_operator(phi: PhiMap, kmax: int, nmax: int) -> OperatorSequence:
    """
    第 n 项只有一个元素 x^{k_n}_0 → x^{k_n}_n，其中 k_1 < k_2 < … 是 φ(k) = 1 的下标

    Raises:
        PreconditionError: φ 在 k ≤ kmax 上未定义或某处 φ(k) > k
        ExhaustionError: kmax 内 φ(k) = 1 的下标不足 nmax 个
    """
    violations = phi_validate(phi, kmax, 1).bound_violations
    if violations:
        raise PreconditionError(f"φ(k) > k 于 k = {list(violations[:5])}")
    basis = BasisSpace('X', kmax)
    if nmax == 0:
        return OperatorSequence(basis, ())
    ks = phi_one_indices(phi, kmax, nmax)
    terms = tuple(from_entries(basis, copy_space(basis, n), [(k - 1, k - 1, 1.0)])
                  for n, k in enumerate(ks, start=1))
    return OperatorSequence(basis, terms)


# ---------------------------------------------------------------- support laws

def random_neighborhood_operator(space: FiniteMetricSpace, members: Iterable[int], L: float,
                                 rng: np.random.Generator, density: float = 0.3) -> SparseOperator:
    """支撑在 B×B 中、d_X 传播 ≤ L 的随机算子"""
    basis = BasisSpace.of(space)
    inside = np.zeros(space.size, dtype=bool)
    inside[sorted(members)] = True
    distances = np.where(inside[:, None] & inside[None, :], space.matrix, np.inf)
    return random_finite_propagation(basis, basis, distances, L, rng, density)


def da_forward_bound(L: float, k: float) -> float:
    """支撑在 N_k(A)×N_k(A) 且 d_X 传播 ≤ L 时 d^A 传播的上界"""
    return L + 2 * k + 3


@dataclass(frozen=True)
class SupportViolation:
    pair: Tuple[PointId, PointId]
    reason: str


def da_converse_violations(metric: LinkingMetric, subset: Subset, L: float) -> List[SupportViolation]:
    """
    d^A 传播 ≤ L 的支撑点对应满足 d_X(x, y) ≤ L−1、d_X(x, A) ≤ L−1、d_X(y, A) ≤ L
    """
    space = metric.left
    to_subset = distance_to_subset(space, subset)
    violations = []
    for left, right in sorted(allowed_support(metric, L)):
        x, y = left.index, right.index
        if space.dist(x, y) > L - 1:
            violations.append(SupportViolation((left, right), f"d_X = {space.dist(x, y):g} > L-1"))
        if to_subset[x] > L - 1:
            violations.append(SupportViolation((left, right), f"d_X(x,A) = {to_subset[x]:g} > L-1"))
        if to_subset[y] > L:
            violations.append(SupportViolation((left, right), f"d_X(y,A) = {to_subset[y]:g} > L"))
    return violations


def prop8_violations(space: FiniteMetricSpace, center: int, L: float) -> Tuple[List[SupportViolation], int]:
    """
    d^{x_0} 下允许的支撑应落在 Ball(x_0, L−1)×Ball(x_0, L−1) 中

    Returns:
        (违反列表, |Ball(x_0, L−1)| 即秩的上界)
    """
    metric = build_linking(space, 'dA', subset=Subset(space, frozenset([center])))
    inside = ball(space, center, L - 1).members
    violations = [SupportViolation((left, right), "outside Ball(x0, L-1)")
                  for left, right in sorted(allowed_support(metric, L))
                  if left.index not in inside or right.index not in inside]
    return violations, len(inside)


def d1_law_violations(space: MultiCopySpace, L: float) -> List[SupportViolation]:
    """d_1 传播 ≤ L 的算子在 n > L 的副本上为零"""
    return [SupportViolation((left, right), f"copy {right.copy} > L")
            for left, right in sorted(allowed_support(space, L)) if right.copy > L]


def ex10_law_violations(space: MultiCopySpace, L: float) -> List[SupportViolation]:
    """n ≥ L 时允许的点对 (x^k_0, x^l_n) 满足 k = l ≥ n"""
    violations = []
    for left, right in sorted(allowed_support(space, L)):
        n, k, l = right.copy, left.index + 1, right.index + 1
        if n >= L and not (k == l and l >= n):
            violations.append(SupportViolation((left, right), f"k={k}, l={l}, n={n}"))
    return violations


def ex12_closed_form_distance(k: int, l: int, n: int) -> int:
    """按坐标公式直接求 d(x^k_0, x^l_n)，不经过嵌入坐标"""
    if l < n:
        return abs(k * k - l * l) + 1
    return abs(k * k - (l * l - n)) + n + 1


def ex12_enumeration_support(kmax: int, nmax: int, L: float) -> frozenset:
    """ex12 度量下允许支撑的独立枚举"""
    return frozenset(
        (PointId(0, k - 1), PointId(n, l - 1))
        for n in range(1, nmax + 1)
        for k in range(1, kmax + 1)
        for l in range(1, kmax + 1)
        if ex12_closed_form_distance(k, l, n) <= L
    )


def ex12_law_violations(space: MultiCopySpace, L: float) -> List[SupportViolation]:
    """
    按公式原样求值时，n ≥ L 的允许点对满足 l < n，且 k = l 或 k + l ≤ L − 1
    """
    violations = []
    for left, right in sorted(allowed_support(space, L)):
        n, k, l = right.copy, left.index + 1, right.index + 1
        if n < L:
            continue
        if l >= n or not (k == l or k + l <= L - 1):
            violations.append(SupportViolation((left, right), f"k={k}, l={l}, n={n}"))
    return violations
