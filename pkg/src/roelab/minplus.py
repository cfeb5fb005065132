#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
(min, +) 半环运算
Tropical (min, +) kernels used for metric composition and triangle checks.

(A ⊗ B)[i, j] = min_k A[i, k] + B[k, j]

按中间下标 k 逐列累积，内存占用 O(n·m)，结果只依赖 min 与 +，
与求值顺序无关（整数值矩阵上逐位相同）。
"""

from typing import Tuple

import numpy as np

from .errors import ShapeError


def min_plus_product(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """
    (min, +) 矩阵乘积

    Args:
        left: 形状 (n, k) 的矩阵
        right: 形状 (k, m) 的矩阵

    Returns:
        np.ndarray: 形状 (n, m) 的乘积
    """
    left = np.asarray(left, dtype=np.float64)
    right = np.asarray(right, dtype=np.float64)
    if left.ndim != 2 or right.ndim != 2 or left.shape[1] != right.shape[0]:
        raise ShapeError(f"(min,+) 乘积形状不匹配: {left.shape} ⊗ {right.shape}")
    if left.shape[1] == 0:
        return np.full((left.shape[0], right.shape[1]), np.inf)

    result = left[:, 0, None] + right[None, 0, :]
    for k in range(1, left.shape[1]):
        np.minimum(result, left[:, k, None] + right[None, k, :], out=result)
    return result


def min_plus_argmin(left: np.ndarray, right: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    (min, +) 乘积及取到最小值的最小中间下标

    Returns:
        Tuple[np.ndarray, np.ndarray]: (乘积, 中间下标)
    """
    left = np.asarray(left, dtype=np.float64)
    right = np.asarray(right, dtype=np.float64)
    if left.ndim != 2 or right.ndim != 2 or left.shape[1] != right.shape[0] or left.shape[1] == 0:
        raise ShapeError(f"(min,+) 乘积形状不匹配: {left.shape} ⊗ {right.shape}")

    result = left[:, 0, None] + right[None, 0, :]
    witness = np.zeros(result.shape, dtype=np.int64)
    for k in range(1, left.shape[1]):
        candidate = left[:, k, None] + right[None, k, :]
        better = candidate < result
        result[better] = candidate[better]
        witness[better] = k
    return result, witness
