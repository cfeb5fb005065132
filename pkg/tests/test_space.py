#!/usr/bin/env python3
"""
有限度量空间与 (min, +) 运算测试
"""

import os
import sys
import unittest

import numpy as np
from hypothesis import given, seed, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../src'))

from roelab.errors import (
    EmptySpaceError,
    EmptySubsetError,
    FarPairsExhaustedError,
    MetricViolationError,
    PreconditionError,
    ShapeError,
)
from roelab.minplus import min_plus_argmin, min_plus_product
from roelab.space import (
    FiniteMetricSpace,
    PointId,
    Subset,
    ball,
    distance_to_subset,
    far_pairs,
    neighborhood,
    square_root_labels,
    squares_space,
    validate_metric,
)


class TestMinPlus(unittest.TestCase):
    """(min, +) 乘积"""

    def test_small_product(self):
        left = np.array([[0.0, 2.0], [1.0, 5.0]])
        right = np.array([[3.0, 0.0], [1.0, 4.0]])
        np.testing.assert_array_equal(min_plus_product(left, right), [[3.0, 0.0], [4.0, 1.0]])

    def test_empty_inner_dimension_gives_infinity(self):
        result = min_plus_product(np.zeros((2, 0)), np.zeros((0, 3)))
        self.assertTrue(np.all(np.isinf(result)))
        self.assertEqual(result.shape, (2, 3))

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            min_plus_product(np.zeros((2, 3)), np.zeros((2, 3)))

    def test_argmin_witness(self):
        dist = squares_space(4).matrix
        product, witness = min_plus_argmin(dist, dist)
        np.testing.assert_array_equal(product, dist)
        # 最短路径的见证点是最小下标：i 或 j 本身
        self.assertTrue(np.all(witness <= np.maximum.outer(np.arange(4), np.arange(4))))

    @settings(max_examples=40, deadline=None)
    @seed(20240521)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=1, max_value=6))
    def test_associativity_on_integer_matrices(self, rng_seed, size):
        """整数矩阵上 (A⊗B)⊗C = A⊗(B⊗C) 逐位成立"""
        rng = np.random.default_rng(rng_seed)
        a, b, c = (rng.integers(0, 50, size=(size, size)).astype(np.float64) for _ in range(3))
        np.testing.assert_array_equal(min_plus_product(min_plus_product(a, b), c),
                                      min_plus_product(a, min_plus_product(b, c)))


class TestFiniteMetricSpace(unittest.TestCase):
    """有限度量空间"""

    def test_squares_space(self):
        space = squares_space(4)
        self.assertEqual(space.labels, (1.0, 4.0, 9.0, 16.0))
        self.assertEqual(space.dist(0, 3), 15.0)
        self.assertEqual(space.diameter, 15.0)
        self.assertTrue(space.integer_valued)
        self.assertEqual(space.tolerance, 0.0)
        self.assertTrue(space.validate().is_valid)
        np.testing.assert_array_equal(square_root_labels(space), [1, 2, 3, 4])

    def test_empty_spaces_rejected(self):
        with self.assertRaises(EmptySpaceError):
            squares_space(0)
        with self.assertRaises(EmptySpaceError):
            FiniteMetricSpace.from_labels([])
        with self.assertRaises(EmptySpaceError):
            FiniteMetricSpace.from_matrix(np.zeros((0, 0)))

    def test_from_matrix_requires_square(self):
        with self.assertRaises(ShapeError):
            FiniteMetricSpace.from_matrix(np.zeros((2, 3)))

    def test_triangle_violation(self):
        """三角不等式失败时给出 (i, k, j)"""
        verdict = validate_metric([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        self.assertFalse(verdict.is_valid)
        self.assertEqual(verdict.kind, 'triangle')
        self.assertEqual(verdict.location, (0, 1, 2))

    def test_other_axiom_violations(self):
        self.assertEqual(validate_metric([[0, 1], [2, 0]]).kind, 'asymmetry')
        self.assertEqual(validate_metric([[0, 0], [0, 0]]).kind, 'positivity')
        self.assertEqual(validate_metric([[1, 1], [1, 0]]).kind, 'diagonal')
        self.assertEqual(validate_metric([[0, -1], [-1, 0]]).kind, 'negative')
        self.assertEqual(validate_metric([[0, np.inf], [np.inf, 0]]).kind, 'non-finite')

    def test_float_metric_uses_tolerance(self):
        matrix = np.array([[0.0, 0.1, 0.3], [0.1, 0.0, 0.2], [0.3, 0.2, 0.0]])
        self.assertTrue(validate_metric(matrix).is_valid)

    def test_from_matrix_rejects_invalid_metric(self):
        with self.assertRaises(MetricViolationError) as context:
            FiniteMetricSpace.from_matrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        self.assertEqual(context.exception.verdict.kind, 'triangle')

    def test_square_root_labels_requires_squares(self):
        with self.assertRaises(PreconditionError):
            square_root_labels(FiniteMetricSpace.from_labels([1, 2]))

    def test_index_of(self):
        space = squares_space(5)
        self.assertEqual(space.index_of(16.0), 3)
        with self.assertRaises(PreconditionError):
            space.index_of(5.0)

    def test_equality(self):
        self.assertEqual(squares_space(5), FiniteMetricSpace.from_labels([1, 4, 9, 16, 25]))
        self.assertNotEqual(squares_space(5), squares_space(6))


class TestSubsets(unittest.TestCase):
    """子集、邻域与球"""

    def setUp(self):
        self.space = squares_space(10)

    def test_point_id_must_be_non_negative(self):
        with self.assertRaises(PreconditionError):
            PointId(-1, 0)
        self.assertLess(PointId(0, 5), PointId(1, 0))

    def test_subset_operations(self):
        a = Subset.from_labels(self.space, [1, 9])
        b = Subset(self.space, frozenset([2, 5]))
        self.assertEqual(a.indices, [0, 2])
        self.assertEqual(a.labels, [1.0, 9.0])
        self.assertEqual(a.union(b).indices, [0, 2, 5])
        self.assertTrue(a.issubset(a.union(b)))
        self.assertEqual(len(a.union(b)), 3)
        with self.assertRaises(PreconditionError):
            Subset(self.space, frozenset([10]))

    def test_neighborhood(self):
        """N_8({1}) = {1, 4, 9}"""
        a = Subset.from_labels(self.space, [1])
        self.assertEqual(neighborhood(self.space, a, 8).labels, [1.0, 4.0, 9.0])
        self.assertEqual(neighborhood(self.space, a, 0).labels, [1.0])
        with self.assertRaises(PreconditionError):
            neighborhood(self.space, a, -1)

    def test_distance_to_empty_subset(self):
        with self.assertRaises(EmptySubsetError):
            distance_to_subset(self.space, Subset(self.space, frozenset()))

    def test_ball(self):
        self.assertTrue(ball(self.space, 0, -1).is_empty())
        self.assertEqual(ball(self.space, 3, 7).labels, [9.0, 16.0])

    def test_far_pairs(self):
        """d(x_i, y_i) > i 且两两不交"""
        pairs = far_pairs(squares_space(40), 10)
        self.assertEqual(len(pairs), 10)
        self.assertEqual(pairs[0], (0, 1))
        points = [p for pair in pairs for p in pair]
        self.assertEqual(len(points), len(set(points)))
        space = squares_space(40)
        for i, (x, y) in enumerate(pairs, start=1):
            self.assertGreater(space.dist(x, y), i)

    def test_far_pairs_exhausted(self):
        with self.assertRaises(FarPairsExhaustedError) as context:
            far_pairs(squares_space(3), 2)
        self.assertEqual(context.exception.achieved, 1)
        self.assertIn("贪心选取只找到 1 个", str(context.exception))


if __name__ == '__main__':
    unittest.main()
