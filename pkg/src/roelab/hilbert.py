#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Hilbert C*-模结构
C*_u(X)-valued inner product ⟨S, T⟩ = S*T, module axiom checks and the
l_2-style sequence modules over the copies X_1, …, X_N.

序列判定（l2-like / dual-like / neither）只是截断尺度上的启发式结论，
报告中总是带上截断长度 N。
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .config_manager import NormSettings
from .errors import PartitionError, PreconditionError, ShapeError
from .operator import (
    BasisSpace,
    SparseOperator,
    add,
    adjoint_op,
    max_abs_difference,
    max_abs_entry,
    multiply,
    operator_norm,
    subtract,
    zero_operator,
)

logger = logging.getLogger(__name__)

ENTRY_TOLERANCE = 1e-12
POSITIVITY_TOLERANCE = 1e-9
NORM_IDENTITY_TOLERANCE = 1e-8
DECAY_THRESHOLD = 1e-6
GROWTH_FACTOR = 1.5


def inner_product(S: SparseOperator, T: SparseOperator,
                  adjoint: Callable[[SparseOperator], SparseOperator] = adjoint_op) -> SparseOperator:
    """⟨S, T⟩ = S*T，结果是 X 上的算子"""
    if (S.domain, S.codomain) != (T.domain, T.codomain):
        raise ShapeError(f"内积要求同一对空间: {S.domain}→{S.codomain} vs {T.domain}→{T.codomain}")
    return multiply(adjoint(S), T)


def right_action(T: SparseOperator, a: SparseOperator) -> SparseOperator:
    """模的右作用 T·a（先 a 再 T）"""
    return multiply(T, a)


@dataclass(frozen=True)
class AxiomResult:
    name: str
    max_violation: float
    tolerance: float
    passed: bool
    checked: int = 0


@dataclass
class AxiomReport:
    """模公理检查报告：每条公理的最大违反量"""
    results: List[AxiomResult] = field(default_factory=list)
    sample_count: int = 0

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failures(self) -> List[str]:
        return [result.name for result in self.results if not result.passed]

    def get(self, name: str) -> AxiomResult:
        for result in self.results:
            if result.name == name:
                return result
        raise KeyError(name)


class _Worst:
    """累积 violation / tolerance 比值最大的一次检查"""

    def __init__(self, name: str):
        self.name = name
        self.violation = 0.0
        self.tolerance = 0.0
        self.ratio = 0.0
        self.failed = False
        self.count = 0

    def record(self, violation: float, tolerance: float) -> None:
        self.count += 1
        ratio = violation / tolerance
        if violation > tolerance:
            self.failed = True
        if ratio >= self.ratio:
            self.ratio, self.violation, self.tolerance = ratio, violation, tolerance

    def result(self, default_tolerance: float) -> AxiomResult:
        return AxiomResult(self.name, self.violation, self.tolerance or default_tolerance,
                           not self.failed, self.count)


def _entry_tolerance(*operators: SparseOperator) -> float:
    return ENTRY_TOLERANCE * max([1.0] + [max_abs_entry(op) for op in operators])


def axiom_check(samples: Sequence[SparseOperator], actions: Sequence[SparseOperator],
                adjoint: Callable[[SparseOperator], SparseOperator] = adjoint_op,
                settings: Optional[NormSettings] = None) -> AxiomReport:
    """
    在样本上逐条检查 Hilbert C*-模公理

    - associativity: (T·a)·b = T·(ab)
    - linearity: ⟨S, T·a⟩ = ⟨S, T⟩a
    - symmetry: ⟨S, T⟩* = ⟨T, S⟩
    - positivity: ⟨T, T⟩ 最小特征值 ≥ −1e-9
    - norm-identity: |‖T‖² − ‖⟨T, T⟩‖| ≤ 1e-8·max(1, ‖T‖²)

    adjoint 可替换为别的实现（用于故障注入）；失败写入报告，不抛异常。
    """
    logger.debug(f"公理检查: {len(samples)} 个样本, {len(actions)} 个作用")
    associativity = _Worst('associativity')
    linearity = _Worst('linearity')
    symmetry = _Worst('symmetry')
    positivity = _Worst('positivity')
    norm_identity = _Worst('norm-identity')

    count = len(samples)
    for i, T in enumerate(samples):
        S = samples[(i + 1) % count]

        if actions:
            a = actions[i % len(actions)]
            b = actions[(i + 1) % len(actions)]
            left = right_action(right_action(T, a), b)
            right = right_action(T, multiply(a, b))
            associativity.record(max_abs_difference(left, right), _entry_tolerance(left, right))

            shifted = inner_product(S, right_action(T, a), adjoint)
            expected = multiply(inner_product(S, T, adjoint), a)
            linearity.record(max_abs_difference(shifted, expected), _entry_tolerance(shifted, expected))

        forward = adjoint(inner_product(S, T, adjoint))
        backward = inner_product(T, S, adjoint)
        symmetry.record(max_abs_difference(forward, backward), _entry_tolerance(forward, backward))

        gram = inner_product(T, T, adjoint)
        if gram.shape[0]:
            dense = gram.to_dense()
            smallest = float(np.linalg.eigvalsh((dense + dense.conj().T) / 2).min())
            positivity.record(max(0.0, -smallest), POSITIVITY_TOLERANCE)

        norm = operator_norm(T, settings=settings)
        gram_norm = operator_norm(gram, settings=settings)
        norm_identity.record(abs(norm ** 2 - gram_norm),
                             NORM_IDENTITY_TOLERANCE * max(1.0, norm ** 2))

    report = AxiomReport(sample_count=count)
    report.results = [
        associativity.result(ENTRY_TOLERANCE),
        linearity.result(ENTRY_TOLERANCE),
        symmetry.result(ENTRY_TOLERANCE),
        positivity.result(POSITIVITY_TOLERANCE),
        norm_identity.result(NORM_IDENTITY_TOLERANCE),
    ]
    if not report.passed:
        logger.warning(f"公理检查未通过: {report.failures}")
    return report


def copy_space(domain: BasisSpace, n: int) -> BasisSpace:
    """副本 X_n 的基空间"""
    return BasisSpace(f"{domain.name}_{n}", domain.size)


def stacked_space(domain: BasisSpace, copies: int) -> BasisSpace:
    """X_1⊔…⊔X_N，点按副本优先排列"""
    return BasisSpace(f"{domain.name}x{{1..{copies}}}", domain.size * copies)


@dataclass(frozen=True, eq=False)
class OperatorSequence:
    """
    序列 (T_1, …, T_N)，第 n 项从 X 映到副本 X_n

    与算子 T: X → X_1⊔…⊔X_N 一一对应（stack / from_stacked）。
    """
    domain: BasisSpace
    terms: Tuple[SparseOperator, ...]

    def __post_init__(self):
        terms = tuple(self.terms)
        for n, term in enumerate(terms, start=1):
            if term.domain != self.domain:
                raise ShapeError(f"第 {n} 项的定义域 {term.domain} 不是 {self.domain}")
            if term.codomain != copy_space(self.domain, n):
                raise ShapeError(f"第 {n} 项的值域 {term.codomain} 不是副本 {copy_space(self.domain, n)}")
        object.__setattr__(self, 'terms', terms)

    @classmethod
    def from_matrices(cls, domain: BasisSpace, matrices: Iterable) -> "OperatorSequence":
        terms = [SparseOperator(domain, copy_space(domain, n), matrix)
                 for n, matrix in enumerate(matrices, start=1)]
        return cls(domain, tuple(terms))

    @classmethod
    def zeros(cls, domain: BasisSpace, length: int) -> "OperatorSequence":
        return cls(domain, tuple(zero_operator(domain, copy_space(domain, n)) for n in range(1, length + 1)))

    @classmethod
    def from_stacked(cls, T: SparseOperator, copies: int) -> "OperatorSequence":
        """T ↦ (Q_n T)：按副本切开值域"""
        size = T.domain.size
        if T.codomain.size != copies * size:
            raise ShapeError(f"值域大小 {T.codomain.size} 不等于 {copies}×{size}")
        matrix = T.matrix.tocsc()
        return cls.from_matrices(T.domain, (matrix[:, n * size:(n + 1) * size].tocsr() for n in range(copies)))

    def __len__(self) -> int:
        return len(self.terms)

    def term(self, n: int) -> SparseOperator:
        """第 n 项（从 1 开始）"""
        if not 1 <= n <= len(self.terms):
            raise PreconditionError(f"项序号 {n} 超出 1..{len(self.terms)}")
        return self.terms[n - 1]

    def stack(self) -> SparseOperator:
        if not self.terms:
            return zero_operator(self.domain, stacked_space(self.domain, 0))
        matrix = sp.hstack([term.matrix for term in self.terms], format='csr')
        return SparseOperator(self.domain, stacked_space(self.domain, len(self.terms)), matrix)

    def prefix(self, N: int) -> "OperatorSequence":
        """L_N 中的截断：保留 T_1..T_N，其后置零"""
        if not 0 <= N <= len(self.terms):
            raise PreconditionError(f"前缀长度 {N} 超出 0..{len(self.terms)}")
        zeros = OperatorSequence.zeros(self.domain, len(self.terms)).terms
        return OperatorSequence(self.domain, self.terms[:N] + zeros[N:])

    def tail(self, N: int) -> "OperatorSequence":
        """T'_N：前 N 项置零"""
        if not 0 <= N <= len(self.terms):
            raise PreconditionError(f"尾部起点 {N} 超出 0..{len(self.terms)}")
        zeros = OperatorSequence.zeros(self.domain, len(self.terms)).terms
        return OperatorSequence(self.domain, zeros[:N] + self.terms[N:])

    def plus(self, other: "OperatorSequence") -> "OperatorSequence":
        if self.domain != other.domain or len(self) != len(other):
            raise ShapeError("序列长度或定义域不一致")
        return OperatorSequence(self.domain, tuple(add(a, b) for a, b in zip(self.terms, other.terms)))

    def is_zero(self) -> bool:
        return all(term.is_zero() for term in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorSequence):
            return NotImplemented
        return self.domain == other.domain and self.terms == other.terms

    __hash__ = None


def sequence_inner_product(S: OperatorSequence, T: OperatorSequence,
                           upto: Optional[int] = None) -> SparseOperator:
    """Σ_{n ≤ upto} ⟨S_n, T_n⟩"""
    if S.domain != T.domain:
        raise ShapeError("两个序列的定义域不一致")
    upto = min(len(S), len(T)) if upto is None else upto
    if not 0 <= upto <= min(len(S), len(T)):
        raise PreconditionError(f"求和上限 {upto} 超出序列长度")
    total = zero_operator(S.domain, S.domain)
    for n in range(upto):
        total = add(total, inner_product(S.terms[n], T.terms[n]))
    return total


def gram_partial_sums(seq: OperatorSequence, N: int) -> SparseOperator:
    """Σ_{n ≤ N} ⟨T_n, T_n⟩"""
    if not 0 <= N <= len(seq):
        raise PreconditionError(f"N = {N} 超出序列长度 {len(seq)}")
    return sequence_inner_product(seq, seq, N)


class MembershipVerdict(Enum):
    L2_LIKE = "l2-like"
    DUAL_LIKE = "dual-like"
    NEITHER = "neither"


@dataclass(frozen=True)
class MembershipReport:
    truncation: int
    ladder: Tuple[int, ...]
    tail_norms: Tuple[float, ...]
    partial_sum_norms: Tuple[float, ...]
    verdict: MembershipVerdict
    note: str = "finite-scale heuristic"


def _ladder(N: int) -> List[int]:
    points, M = [], 1
    while M <= N:
        points.append(M)
        M *= 2
    if points[-1] != N:
        points.append(N)
    return points


def membership_probe(seq: OperatorSequence, settings: Optional[NormSettings] = None,
                     bound: Optional[float] = None) -> MembershipReport:
    """
    截断尺度上的 l_2 / 对偶模成员探测

    - tail_norms: ‖Σ_{n=M}^{N} ⟨T_n, T_n⟩‖，M 取 1, 2, 4, …, N
    - partial_sum_norms: ‖Σ_{n≤m} ⟨T_n, T_n⟩‖，m = 1..N
    最后一个尾部低于 1e-6 判为 l2-like；部分和超过 bound（未给出时：
    ‖P_N‖ > 1.5·max_{m ≤ N/2} ‖P_m‖）判为 neither；其余为 dual-like。
    """
    N = len(seq)
    if N == 0:
        raise PreconditionError("membership_probe 需要非空序列")

    grams = [inner_product(term, term) for term in seq.terms]
    partial, running = [], zero_operator(seq.domain, seq.domain)
    for gram in grams:
        running = add(running, gram)
        partial.append(operator_norm(running, settings=settings))

    ladder = _ladder(N)
    suffix, tails = zero_operator(seq.domain, seq.domain), {}
    for M in range(N, 0, -1):
        suffix = add(suffix, grams[M - 1])
        if M in ladder:
            tails[M] = operator_norm(suffix, settings=settings)
    tail_norms = tuple(tails[M] for M in ladder)

    if tail_norms[-1] < DECAY_THRESHOLD:
        verdict = MembershipVerdict.L2_LIKE
    else:
        early = max(partial[:max(1, N // 2)])
        growing = partial[-1] > bound if bound is not None else partial[-1] > GROWTH_FACTOR * early
        verdict = MembershipVerdict.NEITHER if growing else MembershipVerdict.DUAL_LIKE

    logger.debug(f"membership_probe N={N}: {verdict.value}")
    return MembershipReport(N, tuple(ladder), tail_norms, tuple(partial), verdict)


class DiagonalClass(Enum):
    D0_PRIME = "D0prime"
    D1_PRIME = "D1prime"
    DIAGONAL_OTHER = "diagonal-other"
    NON_DIAGONAL = "non-diagonal"


@dataclass(frozen=True)
class DiagonalReport:
    verdict: DiagonalClass
    both_patterns: bool = False


def diagonal_class(seq: OperatorSequence) -> DiagonalReport:
    """
    对角序列的分类（槽位 i 与项序号 n 都从 1 开始）

    D0prime: d_n^i = 0 对 i < n；D1prime: d_n^i = 0 对 i > n。
    两种模式同时成立时归为 D0prime 并记录 both_patterns。
    """
    zero_below, zero_above = True, True
    for n, term in enumerate(seq.terms, start=1):
        if not term.is_diagonal():
            return DiagonalReport(DiagonalClass.NON_DIAGONAL)
        slots = term.support()[0] + 1
        if np.any(slots < n):
            zero_below = False
        if np.any(slots > n):
            zero_above = False

    if zero_below:
        return DiagonalReport(DiagonalClass.D0_PRIME, both_patterns=zero_above)
    if zero_above:
        return DiagonalReport(DiagonalClass.D1_PRIME)
    return DiagonalReport(DiagonalClass.DIAGONAL_OTHER)


def split_codomain(T: SparseOperator, partition: Tuple[Iterable[int], Iterable[int]]
                   ) -> Tuple[SparseOperator, SparseOperator]:
    """
    按值域划分 Y = Y_1⊔Y_2 拆开 T：T_i 只保留落在 Y_i 中的元素

    Raises:
        PartitionError: 两部分有重叠或没有覆盖值域
    """
    first, second = (set(getattr(part, 'members', part)) for part in partition)
    overlap = first & second
    if overlap:
        raise PartitionError(f"划分有重叠: {sorted(overlap)[:5]}")
    missing = set(range(T.codomain.size)) - (first | second)
    if missing:
        raise PartitionError(f"划分未覆盖值域: {sorted(missing)[:5]}")
    outside = (first | second) - set(range(T.codomain.size))
    if outside:
        raise PartitionError(f"划分包含值域外的点: {sorted(outside)[:5]}")

    mask = np.zeros(T.codomain.size)
    mask[sorted(first)] = 1.0
    keep_first = sp.diags(mask, format='csr')
    T1 = SparseOperator(T.domain, T.codomain, T.matrix @ keep_first)
    return T1, subtract(T, T1)
