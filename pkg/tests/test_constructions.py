#!/usr/bin/env python3
"""
显式构造测试：φ 映射、远点对见证、多副本序列与支撑定律
"""

import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../src'))

from roelab.constructions import (
    PairList,
    PhiMap,
    corner_parts,
    d1_law_violations,
    da_converse_violations,
    da_forward_bound,
    diagonal_parts,
    distinct_subsequence,
    example14_metric,
    example14_operator,
    ex10_law_violations,
    ex12_closed_form_distance,
    ex12_enumeration_support,
    ex12_law_violations,
    multicopy_columns,
    neighborhood_projection,
    phi_validate,
    prefix_entry_identity,
    projection_ladder,
    prop4_witness,
    prop8_violations,
    random_neighborhood_operator,
    repetition_bound,
    tail_compression_norm,
    theorem2_union,
    theorem2_witness,
    theorem9_products,
    theorem9_sequences,
)
from roelab.errors import EmptySubsetError, ExhaustionError, PreconditionError
from roelab.hilbert import OperatorSequence, copy_space
from roelab.linking import allowed_support, build_linking, build_multicopy, embedding_coords
from roelab.operator import BasisSpace, adjoint_op, from_entries, operator_norm, propagation
from roelab.space import FiniteMetricSpace, PointId, Subset, neighborhood, squares_space


class TestPhiMap(unittest.TestCase):
    """φ 映射"""

    def test_ruler_values(self):
        self.assertEqual(PhiMap.ruler(8).values, (1, 2, 1, 3, 1, 2, 1, 4))
        self.assertEqual(PhiMap.ruler(8).indices_with_value(1), [1, 3, 5, 7])
        with self.assertRaises(PreconditionError):
            PhiMap.ruler(8)(9)
        with self.assertRaises(PreconditionError):
            PhiMap((0, 1))

    def test_validate(self):
        """取值 4 在 k ≤ 16 中只出现一次（k = 8），到 32 时出现两次"""
        verdict = phi_validate(PhiMap.ruler(16), 16, 4)
        self.assertFalse(verdict.is_valid)
        self.assertEqual(verdict.repetition_failures, (4,))
        self.assertEqual(verdict.bound_violations, ())
        self.assertTrue(phi_validate(PhiMap.ruler(32), 32, 4).is_valid)

    def test_validate_bound(self):
        verdict = phi_validate(PhiMap((2, 1, 1)), 3, 1)
        self.assertEqual(verdict.bound_violations, (1,))
        self.assertEqual(verdict.counts, {1: 2})

    def test_validate_preconditions(self):
        with self.assertRaises(PreconditionError):
            phi_validate(PhiMap.ruler(4), 4, 5)
        with self.assertRaises(PreconditionError):
            phi_validate(PhiMap.ruler(4), 8, 2)


class TestFarPairWitnesses(unittest.TestCase):
    """远点对上的部分置换"""

    def setUp(self):
        self.space = squares_space(40)
        self.pairs = PairList.from_far_pairs(self.space, 6)

    def test_pair_list(self):
        self.assertEqual(len(self.pairs), 6)
        self.assertEqual(len(self.pairs.points()), 12)
        self.assertEqual(self.pairs.points(2), list(self.pairs.pairs[0] + self.pairs.pairs[1]))
        for i, distance in enumerate(self.pairs.distances, start=1):
            self.assertGreater(distance, i)
        with self.assertRaises(PreconditionError):
            PairList(((0, 1), (1, 2)))

    def test_theorem2_witness(self):
        for n in range(0, 7):
            T = theorem2_witness(self.pairs, n)
            self.assertEqual(T.nnz, 2 * n)
            self.assertEqual(adjoint_op(T), T)
            self.assertAlmostEqual(operator_norm(T), 1.0 if n else 0.0, places=12)
            if n:
                self.assertEqual(propagation(T, self.space), max(self.pairs.distances[:n]))
        self.assertEqual(theorem2_union(self.pairs), theorem2_witness(self.pairs, 6))
        with self.assertRaises(PreconditionError):
            theorem2_witness(self.pairs, 7)
        with self.assertRaises(PreconditionError):
            theorem2_witness(PairList(((0, 1),)), 1)

    def test_distinct_subsequence(self):
        self.assertEqual(distinct_subsequence([(0, 5), (0, 6), (1, 5), (2, 7)]), [(0, 5), (2, 7)])

    def test_prop4_witness(self):
        X, Y = BasisSpace('X', 4), BasisSpace('Y', 8)
        T = prop4_witness([(0, 5), (2, 7)], X, Y)
        self.assertEqual(T.entries(), {(0, 5): 1.0, (2, 7): 1.0})
        with self.assertRaises(PreconditionError):
            prop4_witness([(0, 5), (0, 6)], X, Y)
        with self.assertRaises(PreconditionError):
            prop4_witness([(0, 5), (1, 5)], X, Y)

    def test_repetition_bound(self):
        dist = squares_space(5).matrix
        evidence = repetition_bound(dist, dist, [(0, 1), (0, 2), (3, 4)], C=9)
        self.assertEqual(len(evidence), 1)
        self.assertEqual(evidence[0].point, 0)
        self.assertEqual(evidence[0].occurrences, 2)
        self.assertEqual(evidence[0].spread_a, 5.0)
        self.assertEqual(evidence[0].bound_a, 18.0)
        self.assertEqual(evidence[0].spread_b_lower, 5.0)

    def test_multicopy_columns(self):
        space = build_multicopy(squares_space(4), 3, 'd1')
        self.assertEqual(multicopy_columns(space, [PointId(1, 0), PointId(2, 1), PointId(3, 3)]), [0, 5, 11])
        with self.assertRaises(PreconditionError):
            multicopy_columns(space, [PointId(0, 1)])


class TestProjections(unittest.TestCase):
    """邻域投影"""

    def setUp(self):
        self.space = squares_space(10)
        self.subset = Subset(self.space, frozenset([0]))

    def test_neighborhood_projection(self):
        P = neighborhood_projection(self.space, self.subset, 8)
        self.assertEqual(P.entries(), {(0, 0): 1.0, (1, 1): 1.0, (2, 2): 1.0})
        with self.assertRaises(EmptySubsetError):
            neighborhood_projection(self.space, Subset(self.space, frozenset()), 1)

    def test_projection_ladder(self):
        """‖(1 − P_k)ξ‖ 趋于 0，而 ‖1 − P_k‖ 直到覆盖全空间才变为 0"""
        steps = projection_ladder(self.space, self.subset, [0, 8, 99])
        self.assertEqual([step.covered for step in steps], [1, 3, 10])
        for step, expected in zip(steps, [1.0, 1.0, 0.0]):
            self.assertAlmostEqual(step.complement_norm, expected, places=12)
        residuals = [step.residual for step in steps]
        self.assertEqual(residuals, sorted(residuals, reverse=True))
        self.assertEqual(residuals[-1], 0.0)
        self.assertAlmostEqual(residuals[0], np.sqrt(0.9), places=12)


class TestMultiCopySequences(unittest.TestCase):
    """序列 (T_n) 与 (S_n)"""

    def setUp(self):
        self.space = squares_space(40)
        self.pairs = PairList.from_far_pairs(self.space, 6)
        self.T, self.S = theorem9_sequences(self.pairs, 6)

    def test_products(self):
        self.assertEqual(theorem9_products(self.T, self.S),
                         {"T_nS_n=T_n": True, "T_nS_n=S_n": False, "T_n^2=S_n": True})

    def test_requires_far_pairs(self):
        """d(x^1, y^1) = 1 不大于 1"""
        space = FiniteMetricSpace.from_labels([0, 1, 5, 6])
        with self.assertRaises(PreconditionError):
            theorem9_sequences(PairList(((0, 1), (2, 3)), space), 2)
        with self.assertRaises(PreconditionError):
            theorem9_sequences(self.pairs, 7)

    def test_prefix_entry_identity(self):
        self.assertEqual(prefix_entry_identity(self.S, self.T, self.pairs, 6), [1.0] * 6)

    def test_tail_compression(self):
        self.assertAlmostEqual(tail_compression_norm(self.S, 2, 3, self.pairs), 1.0, places=12)
        self.assertEqual(tail_compression_norm(self.S, 3, 3, self.pairs), 0.0)
        self.assertEqual(tail_compression_norm(self.S, 5, 3, self.pairs), 0.0)


class TestSquaresDecompositions(unittest.TestCase):
    """X = N² 上的对角与角部分解"""

    def test_diagonal_and_corner_parts(self):
        X = BasisSpace('X', 4)
        term = from_entries(X, copy_space(X, 1), {(0, 0): 2.0, (0, 1): 3.0, (3, 3): 5.0, (2, 3): 7.0})
        seq = OperatorSequence(X, (term,))
        self.assertEqual(diagonal_parts(seq).term(1).entries(), {(0, 0): 2.0, (3, 3): 5.0})
        self.assertEqual(corner_parts(seq, 2).term(1).entries(), {(0, 1): 3.0})
        self.assertEqual(corner_parts(seq, 4).term(1).entries(), {(0, 1): 3.0, (2, 3): 7.0})

    def test_example14_operator(self):
        seq = example14_operator(PhiMap.ruler(16), 16, 4)
        self.assertEqual([term.entries() for term in seq.terms],
                         [{(0, 0): 1.0}, {(2, 2): 1.0}, {(4, 4): 1.0}, {(6, 6): 1.0}])
        self.assertEqual(len(example14_operator(PhiMap.ruler(4), 4, 0)), 0)
        with self.assertRaises(ExhaustionError):
            example14_operator(PhiMap.ruler(4), 4, 3)
        with self.assertRaises(PreconditionError):
            example14_operator(PhiMap((1, 3, 1, 1)), 4, 2)
        with self.assertRaises(PreconditionError):
            example14_operator(PhiMap.ruler(4), 8, 1)

    def test_example14_metric(self):
        """d(x^k_0, x^k_n) = 2φ(k)"""
        phi = PhiMap.ruler(8)
        space = example14_metric(phi, 8, 3)
        for n in range(1, 4):
            for k in range(1, 9):
                self.assertEqual(space.distance(PointId(0, k - 1), PointId(n, k - 1)), 2.0 * phi(k))


class TestSupportLaws(unittest.TestCase):
    """各度量下允许支撑的定律"""

    def test_da_forward_bound(self):
        self.assertEqual(da_forward_bound(2, 3), 11)

    def test_da_forward_bound_holds_on_samples(self):
        space = squares_space(20)
        subset = Subset(space, frozenset([2, 9]))
        metric = build_linking(space, 'dA', subset=subset)
        rng = np.random.default_rng(20240521)
        for k in (0, 5, 40):
            members = neighborhood(space, subset, k).members
            for L in (3, 10, 30):
                T = random_neighborhood_operator(space, members, L, rng, density=0.6)
                self.assertLessEqual(propagation(T, space), L)
                rows, cols = T.support()
                self.assertTrue(set(rows.tolist()) | set(cols.tolist()) <= members)
                self.assertLessEqual(propagation(T, metric), da_forward_bound(L, k))

    def test_da_converse(self):
        space = squares_space(20)
        subset = Subset(space, frozenset([4]))
        metric = build_linking(space, 'dA', subset=subset)
        for L in (1, 5, 12, 60):
            self.assertEqual(da_converse_violations(metric, subset, L), [])

    def test_prop8(self):
        space = squares_space(20)
        violations, rank = prop8_violations(space, 5, 30)
        self.assertEqual(violations, [])
        # Ball(36, 29) = {9, 16, 25, 36, 49, 64}
        self.assertEqual(rank, 6)

    def test_d1_law(self):
        space = build_multicopy(squares_space(8), 6, 'd1')
        for L in range(1, 7):
            self.assertEqual(d1_law_violations(space, L), [])
        self.assertEqual({right.copy for _, right in allowed_support(space, 3)}, {1, 2, 3})

    def test_ex10_law(self):
        space = build_multicopy(squares_space(8), 6, 'embed', embedding_coords('ex10', 8, 6))
        for L in range(1, 7):
            self.assertEqual(ex10_law_violations(space, L), [])

    def test_ex12_closed_form(self):
        self.assertEqual(ex12_closed_form_distance(3, 3, 2), 5)
        self.assertEqual(ex12_closed_form_distance(1, 1, 2), 1)

    def test_ex12_enumeration_matches_embedding(self):
        space = build_multicopy(squares_space(8), 4, 'embed', embedding_coords('ex12', 8, 4))
        self.assertEqual(ex12_enumeration_support(8, 4, 4), allowed_support(space, 4))
        for L in range(1, 5):
            self.assertEqual(ex12_law_violations(space, L), [])


if __name__ == '__main__':
    unittest.main()
