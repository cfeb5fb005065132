#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
有限传播算子
Sparse finite-propagation operators between basis spaces: propagation,
band truncation, operator norm, the *-algebra operations and the
compact + diagonal split on X = N².

约定：entry (x, y) 是 T δ_x 中 δ_y 的系数，存储矩阵按 (定义域, 值域) 排列。
因此 A∘B 的存储矩阵为 B.M @ A.M，伴随为共轭转置。
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .config_manager import NormSettings
from .errors import ConvergenceError, MetricDomainError, PreconditionError, ShapeError
from .linking import LinkingMetric, MultiCopySpace
from .space import FLOAT_TOLERANCE, FiniteMetricSpace, is_integer_valued, square_root_labels

logger = logging.getLogger(__name__)

DROP_TOLERANCE = 1e-15
LANCZOS_VECTORS = 64

Entry = Tuple[int, int]


@dataclass(frozen=True)
class BasisSpace:
    """基 {δ_x} 的索引集合：名称 + 点数"""
    name: str
    size: int

    def __post_init__(self):
        if self.size < 0:
            raise PreconditionError(f"基空间大小必须非负: {self.size}")

    @classmethod
    def of(cls, space: FiniteMetricSpace, name: Optional[str] = None) -> "BasisSpace":
        return cls(name or space.name, space.size)

    @classmethod
    def copy_of(cls, space: FiniteMetricSpace, n: int) -> "BasisSpace":
        """多副本空间的第 n 个副本 X_n"""
        return cls(f"{space.name}_{n}", space.size)


def _clean(matrix, drop_tolerance: float = DROP_TOLERANCE) -> sp.csr_matrix:
    matrix = sp.csr_matrix(matrix, dtype=np.complex128, copy=True)
    if matrix.nnz:
        small = np.abs(matrix.data) < drop_tolerance
        if small.any():
            matrix.data[small] = 0
    matrix.eliminate_zeros()
    matrix.sort_indices()
    return matrix


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """
    定义域到值域的稀疏算子

    不存储零元；幅值低于 1e-15 的元素在构造时丢弃。
    """
    domain: BasisSpace
    codomain: BasisSpace
    matrix: sp.csr_matrix = field(repr=False)

    def __post_init__(self):
        matrix = _clean(self.matrix)
        if matrix.shape != (self.domain.size, self.codomain.size):
            raise ShapeError(f"矩阵形状 {matrix.shape} 与基空间 "
                             f"({self.domain.size}, {self.codomain.size}) 不一致")
        object.__setattr__(self, 'matrix', matrix)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    @property
    def nnz(self) -> int:
        return int(self.matrix.nnz)

    def is_zero(self) -> bool:
        return self.nnz == 0

    def support(self) -> Tuple[np.ndarray, np.ndarray]:
        """非零元位置 (x 数组, y 数组)"""
        coo = self.matrix.tocoo()
        return coo.row.astype(np.int64), coo.col.astype(np.int64)

    def entries(self) -> Dict[Entry, complex]:
        coo = self.matrix.tocoo()
        return {(int(x), int(y)): complex(v) for x, y, v in zip(coo.row, coo.col, coo.data)}

    def entry(self, x: int, y: int) -> complex:
        return complex(self.matrix[x, y])

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def is_diagonal(self) -> bool:
        rows, cols = self.support()
        return bool(np.all(rows == cols))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseOperator):
            return NotImplemented
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            return False
        return (self.matrix != other.matrix).nnz == 0

    __hash__ = None


def from_entries(domain: BasisSpace, codomain: BasisSpace,
                 entries: Union[Mapping[Entry, complex], Iterable[Tuple[int, int, complex]]]) -> SparseOperator:
    """由 {(x, y): value} 或 (x, y, value) 三元组构造算子；重复位置累加"""
    if isinstance(entries, Mapping):
        triplets = [(x, y, v) for (x, y), v in entries.items()]
    else:
        triplets = list(entries)
    if not triplets:
        return zero_operator(domain, codomain)
    rows, cols, values = zip(*triplets)
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    if rows.min() < 0 or cols.min() < 0 or rows.max() >= domain.size or cols.max() >= codomain.size:
        raise ShapeError(f"元素下标超出 ({domain.size}, {codomain.size})")
    matrix = sp.coo_matrix((np.asarray(values, dtype=np.complex128), (rows, cols)),
                           shape=(domain.size, codomain.size))
    return SparseOperator(domain, codomain, matrix.tocsr())


def from_dense(domain: BasisSpace, codomain: BasisSpace, array) -> SparseOperator:
    return SparseOperator(domain, codomain, sp.csr_matrix(np.asarray(array, dtype=np.complex128)))


def zero_operator(domain: BasisSpace, codomain: BasisSpace) -> SparseOperator:
    return SparseOperator(domain, codomain, sp.csr_matrix((domain.size, codomain.size), dtype=np.complex128))


def identity(space: BasisSpace) -> SparseOperator:
    return SparseOperator(space, space, sp.identity(space.size, dtype=np.complex128, format='csr'))


def diagonal_projection(space: BasisSpace, members: Iterable[int]) -> SparseOperator:
    """到 l_2(B) 的对角 0/1 投影"""
    return from_entries(space, space, [(int(m), int(m), 1.0) for m in sorted(set(members))])


def _distance_block(T: SparseOperator, metric, copy: Optional[int] = None) -> np.ndarray:
    """把度量对象解析为 (定义域 × 值域) 距离块"""
    if isinstance(metric, FiniteMetricSpace):
        block = metric.matrix
    elif isinstance(metric, LinkingMetric):
        block = metric.cross
    elif isinstance(metric, MultiCopySpace):
        if copy is not None:
            block = metric.cross_block(copy)
        elif T.codomain.size == metric.copies * metric.size:
            block = metric.stacked_cross()
        elif T.codomain.size == metric.size and T.domain.size == metric.size:
            raise MetricDomainError("多副本空间上的单副本算子需要指定 copy")
        else:
            block = metric.full_matrix()
    else:
        block = np.asarray(metric, dtype=np.float64)

    if block.shape[0] < T.domain.size or block.shape[1] < T.codomain.size:
        raise MetricDomainError(f"距离块 {block.shape} 不覆盖算子形状 {T.shape}")
    return block


def support_distances(T: SparseOperator, metric, copy: Optional[int] = None) -> np.ndarray:
    """支撑上每个非零元对应的距离 d(x, y)"""
    rows, cols = T.support()
    if rows.size == 0:
        return np.zeros(0)
    block = _distance_block(T, metric, copy)
    return block[rows, cols]


def propagation(T: SparseOperator, metric, copy: Optional[int] = None) -> float:
    """
    传播 max{ d(x, y) : (x, y) ∈ supp T }；零算子约定为 0

    Args:
        T: 算子
        metric: 距离块（定义域 × 值域）、FiniteMetricSpace、LinkingMetric 或 MultiCopySpace
        copy: 多副本空间中值域所在副本；None 时按值域大小选择堆叠块或完整矩阵
    """
    distances = support_distances(T, metric, copy)
    if distances.size == 0:
        return 0.0
    return float(distances.max())


def band_truncate(T: SparseOperator, metric, L: float, copy: Optional[int] = None) -> SparseOperator:
    """丢弃 d(x, y) > L 的元素；结果的传播 ≤ L，幂等"""
    if L < 0:
        raise PreconditionError(f"截断带宽必须非负: {L}")
    if T.is_zero():
        return T
    distances = support_distances(T, metric, copy)
    tolerance = 0.0 if is_integer_valued(distances) else FLOAT_TOLERANCE
    coo = T.matrix.tocoo()
    keep = distances <= L + tolerance
    matrix = sp.coo_matrix((coo.data[keep], (coo.row[keep], coo.col[keep])), shape=T.shape)
    return SparseOperator(T.domain, T.codomain, matrix.tocsr())


def _gram(matrix: sp.csr_matrix) -> sp.csr_matrix:
    """较小一侧的 Gram 矩阵；其最大特征值为 ‖T‖²"""
    rows, cols = matrix.shape
    adjoint_matrix = matrix.conj().T.tocsr()
    gram = (matrix @ adjoint_matrix) if rows <= cols else (adjoint_matrix @ matrix)
    gram = gram.tocsr()
    if not np.any(gram.data.imag):
        gram = gram.real.tocsr()
    return gram


def operator_norm(T: SparseOperator, tol: Optional[float] = None,
                  settings: Optional[NormSettings] = None) -> float:
    """
    算子范数（最大奇异值）

    较小一侧维数低于 dense_threshold 时用稠密分解；
    否则对 Gram 矩阵做 Lanczos (scipy eigsh)，固定种子的起始向量，
    以残差 ‖G v − λ v‖ ≤ tol·λ 为停止条件。

    Raises:
        ConvergenceError: 超过迭代上限，携带最后迭代向量与残差
    """
    settings = settings or NormSettings()
    tol = settings.tolerance if tol is None else tol
    if tol <= 0:
        raise PreconditionError(f"范数容差必须为正: {tol}")
    if T.is_zero():
        return 0.0

    # ARPACK 需要 Gram 维数至少为 3
    if min(T.shape) < max(settings.dense_threshold, 3):
        return float(np.linalg.norm(T.to_dense(), 2))

    gram = _gram(T.matrix)
    size = gram.shape[0]
    rng = np.random.default_rng(settings.seed)
    start = rng.standard_normal(size)
    if np.iscomplexobj(gram.data):
        start = start + 1j * rng.standard_normal(size)

    try:
        values, _ = spla.eigsh(gram, k=1, which='LA', v0=start, tol=tol,
                               ncv=min(size, LANCZOS_VECTORS), maxiter=settings.max_iterations)
    except spla.ArpackNoConvergence as e:
        vector = e.eigenvectors[:, 0] if e.eigenvectors.size else start / np.linalg.norm(start)
        image = gram @ vector
        residual = float(np.linalg.norm(image - np.real(np.vdot(vector, image)) * vector))
        raise ConvergenceError(f"Lanczos 在 {settings.max_iterations} 次重启内未收敛 (残差 {residual:.3e})",
                               last_iterate=vector, residual=residual) from e

    largest = max(float(values[0]), 0.0)
    logger.debug(f"Lanczos 收敛: 维数 {size}, λ = {largest:.12g}")
    return float(np.sqrt(largest))


def adjoint_op(T: SparseOperator) -> SparseOperator:
    """共轭转置：结果的 (y, x) 元为 T 的 (x, y) 元的共轭"""
    return SparseOperator(T.codomain, T.domain, T.matrix.conj().T.tocsr())


def multiply(A: SparseOperator, B: SparseOperator) -> SparseOperator:
    """复合 A∘B（先 B 后 A），要求 B.codomain == A.domain"""
    if B.codomain != A.domain:
        raise ShapeError(f"无法复合: {B.codomain} → 需要 {A.domain}")
    return SparseOperator(B.domain, A.codomain, B.matrix @ A.matrix)


def _require_same_spaces(A: SparseOperator, B: SparseOperator) -> None:
    if (A.domain, A.codomain) != (B.domain, B.codomain):
        raise ShapeError(f"算子空间不一致: {A.domain}→{A.codomain} vs {B.domain}→{B.codomain}")


def add(A: SparseOperator, B: SparseOperator) -> SparseOperator:
    _require_same_spaces(A, B)
    return SparseOperator(A.domain, A.codomain, A.matrix + B.matrix)


def subtract(A: SparseOperator, B: SparseOperator) -> SparseOperator:
    _require_same_spaces(A, B)
    return SparseOperator(A.domain, A.codomain, A.matrix - B.matrix)


def scale(T: SparseOperator, factor: complex) -> SparseOperator:
    return SparseOperator(T.domain, T.codomain, T.matrix * factor)


def relabel(T: SparseOperator, domain: Optional[BasisSpace] = None,
            codomain: Optional[BasisSpace] = None) -> SparseOperator:
    """按 x_n ↦ x 识别副本：只换基空间名称，不改元素"""
    domain = domain or T.domain
    codomain = codomain or T.codomain
    if (domain.size, codomain.size) != T.shape:
        raise ShapeError(f"重新标记要求大小一致: {T.shape} vs ({domain.size}, {codomain.size})")
    return SparseOperator(domain, codomain, T.matrix)


def max_abs_difference(A: SparseOperator, B: SparseOperator) -> float:
    """逐元素最大差 max |A − B|（只比较矩阵，不比较基空间名称）"""
    if A.shape != B.shape:
        raise ShapeError(f"形状不一致: {A.shape} vs {B.shape}")
    difference = (A.matrix - B.matrix).tocoo()
    return float(np.abs(difference.data).max()) if difference.nnz else 0.0


def max_abs_entry(T: SparseOperator) -> float:
    return float(np.abs(T.matrix.data).max()) if T.nnz else 0.0


def random_finite_propagation(domain: BasisSpace, codomain: BasisSpace, distances: np.ndarray,
                              L: float, rng: np.random.Generator, density: float = 0.3,
                              complex_entries: bool = True) -> SparseOperator:
    """
    随机生成传播 ≤ L 的算子（测试与场景用，调用方提供带种子的生成器）

    Args:
        distances: (定义域 × 值域) 距离块
        L: 传播上界
        density: 允许位置中非零元的比例
    """
    distances = np.asarray(distances)
    allowed = np.argwhere(distances[:domain.size, :codomain.size] <= L)
    if allowed.size == 0:
        return zero_operator(domain, codomain)
    chosen = allowed[rng.random(len(allowed)) < density]
    values = rng.standard_normal(len(chosen))
    if complex_entries:
        values = values + 1j * rng.standard_normal(len(chosen))
    return from_entries(domain, codomain, [(int(x), int(y), v) for (x, y), v in zip(chosen, values)])


def compact_diagonal_split(T: SparseOperator, space: FiniteMetricSpace,
                           L: float) -> Tuple[SparseOperator, SparseOperator]:
    """
    X = N² 上的分解 T = K + D

    D 为 T 的对角部分，K = T − D。由 |j² − k²| = (j+k)|j−k| ≥ j+k，
    传播 ≤ L 时 K 的每个元素都落在有限角 {(j², k²) : j + k ≤ L} 中。

    Raises:
        PreconditionError: T 不在 space 上，或传播超过 L
    """
    if T.shape != (space.size, space.size):
        raise ShapeError(f"算子形状 {T.shape} 与空间大小 {space.size} 不一致")
    value = propagation(T, space)
    if value > L + space.tolerance:
        raise PreconditionError(f"算子传播 {value:g} 超过 L = {L:g}")

    diagonal = sp.diags(T.matrix.diagonal(), format='csr')
    D = SparseOperator(T.domain, T.codomain, diagonal)
    K = subtract(T, D)
    return K, D


def corner_violations(K: SparseOperator, space: FiniteMetricSpace, L: float) -> List[Tuple[int, int]]:
    """K 中不满足 j + k ≤ L 的元素（以 (j, k) 表示，标签为 j², k²）"""
    roots = square_root_labels(space)
    rows, cols = K.support()
    return [(int(roots[x]), int(roots[y])) for x, y in zip(rows, cols) if roots[x] + roots[y] > L]
