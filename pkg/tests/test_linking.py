#!/usr/bin/env python3
"""
跨副本度量、多副本空间与畸变剖面测试
"""

import os
import sys
import unittest

import numpy as np
from hypothesis import given, seed, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../src'))

from roelab.errors import (
    DegenerateEmbeddingError,
    EmptySubsetError,
    MetricViolationError,
    PointSetMismatchError,
    PreconditionError,
    ShapeError,
)
from roelab.linking import (
    EmbeddingCoordinates,
    LinkingKind,
    MultiCopyRule,
    adjoint,
    allowed_mask,
    allowed_support,
    build_linking,
    build_multicopy,
    compose,
    distortion_profile,
    dominates,
    embedding_coords,
    idempotent_evidence,
)
from roelab.space import FiniteMetricSpace, PointId, Subset, squares_space


class TestBuildLinking(unittest.TestCase):
    """X_0⊔X_1 上的跨副本度量"""

    def setUp(self):
        self.space = squares_space(4)
        self.dist = self.space.matrix

    def test_unit(self):
        unit = build_linking(self.space, 'unit')
        np.testing.assert_array_equal(unit.cross, self.dist + 1)
        self.assertEqual(unit.distance(PointId(0, 2), PointId(1, 2)), 1.0)
        self.assertEqual(unit.distance(PointId(1, 0), PointId(0, 3)), 16.0)
        self.assertEqual(unit.distance(PointId(1, 0), PointId(1, 3)), 15.0)
        self.assertTrue(unit.validate().is_valid)

    def test_zero(self):
        zero = build_linking(self.space, 'zero', u=0)
        np.testing.assert_array_equal(zero.cross, self.dist[:, 0, None] + self.dist[None, 0, :] + 1)
        self.assertEqual(zero.params, {'u': 0})
        with self.assertRaises(PreconditionError):
            build_linking(self.space, 'zero')

    def test_da_example(self):
        """A = {1, 9}: d^A(4_0, 16_1) = min(3+15, 5+7) + 1 = 13"""
        subset = Subset.from_labels(self.space, [1, 9])
        metric = build_linking(self.space, LinkingKind.DA, subset=subset)
        self.assertEqual(metric.distance(PointId(0, 1), PointId(1, 3)), 13.0)
        self.assertEqual(metric.params['A'], (0, 2))

    def test_da_requires_subset(self):
        with self.assertRaises(EmptySubsetError):
            build_linking(self.space, 'dA', subset=Subset(self.space, frozenset()))

    def test_point_linking(self):
        point = build_linking(self.space, 'point', u=1)
        self.assertEqual(point.cross.shape, (4, 1))
        np.testing.assert_array_equal(point.cross[:, 0], self.dist[:, 1] + 1)
        self.assertFalse(point.is_square)
        with self.assertRaises(ShapeError):
            adjoint(point)

    def test_custom_rejects_triangle_violation(self):
        """所有跨副本距离为 1 时 d(1_0, 9_0) = 8 > 1 + 1"""
        with self.assertRaises(MetricViolationError):
            build_linking(self.space, 'custom', cross=np.ones((4, 4)))
        with self.assertRaises(ShapeError):
            build_linking(self.space, 'custom', cross=np.ones((3, 4)))

    def test_restrict_right_keeps_original_indices(self):
        unit = build_linking(self.space, 'unit')
        restricted = unit.restrict_right([1, 3])
        self.assertEqual(restricted.cross.shape, (4, 2))
        self.assertEqual(allowed_support(restricted, 1), frozenset({
            (PointId(0, 1), PointId(1, 1)), (PointId(0, 3), PointId(1, 3))}))

    def test_allowed_support(self):
        unit = build_linking(self.space, 'unit')
        self.assertEqual(allowed_support(unit, 0), frozenset())
        self.assertEqual(len(allowed_support(unit, 1)), 4)
        self.assertEqual(allowed_mask(unit, 4).sum(), 6)
        with self.assertRaises(PreconditionError):
            allowed_support(unit, -1)


class TestSemigroup(unittest.TestCase):
    """合成、伴随与单位元"""

    def setUp(self):
        self.space = squares_space(6)

    def test_unit_compose_unit(self):
        unit = build_linking(self.space, 'unit')
        np.testing.assert_array_equal(compose(unit, unit).cross, self.space.matrix + 2)

    def test_zero_squared(self):
        zero = build_linking(self.space, 'zero', u=2)
        dist = self.space.matrix
        np.testing.assert_array_equal(compose(zero, zero).cross, dist[:, 2, None] + dist[None, 2, :] + 2)

    def test_compose_requires_same_base(self):
        with self.assertRaises(ShapeError):
            compose(build_linking(self.space, 'unit'), build_linking(squares_space(5), 'unit'))

    def test_adjoint_involution(self):
        zero = build_linking(self.space, 'zero', u=1)
        self.assertEqual(adjoint(adjoint(zero)), zero)

    def test_idempotent_evidence(self):
        forward, backward = idempotent_evidence(build_linking(self.space, 'zero', u=0))
        self.assertTrue(forward.is_monotone)
        self.assertTrue(backward.is_monotone)
        self.assertTrue(np.isfinite(forward.maximum))

    @settings(max_examples=25, deadline=None)
    @seed(7)
    @given(st.lists(st.tuples(st.sampled_from(['unit', 'zero', 'dA']), st.integers(min_value=0, max_value=5),
                              st.frozensets(st.integers(min_value=0, max_value=5), min_size=1, max_size=3)),
                    min_size=3, max_size=3))
    def test_semigroup_laws(self, choices):
        """结合律、反同态与单位平移在整数度量上逐位成立"""
        metrics = []
        for kind, u, members in choices:
            if kind == 'unit':
                metrics.append(build_linking(self.space, 'unit'))
            elif kind == 'zero':
                metrics.append(build_linking(self.space, 'zero', u=u))
            else:
                metrics.append(build_linking(self.space, 'dA', subset=Subset(self.space, members)))
        a, b, c = metrics
        np.testing.assert_array_equal(compose(compose(a, b), c).cross, compose(a, compose(b, c)).cross)
        np.testing.assert_array_equal(adjoint(compose(a, b)).cross, compose(adjoint(b), adjoint(a)).cross)
        unit = build_linking(self.space, 'unit')
        np.testing.assert_array_equal(compose(a, unit).cross, a.cross + 1)
        np.testing.assert_array_equal(compose(unit, a).cross, a.cross + 1)


class TestMultiCopy(unittest.TestCase):
    """X⊔(X×{1..N}) 上的度量"""

    def setUp(self):
        self.space = squares_space(6)

    def test_formula_rules(self):
        d0 = build_multicopy(self.space, 4, 'd0')
        d1 = build_multicopy(self.space, 4, MultiCopyRule.D1)
        np.testing.assert_array_equal(d1.block(1, 3), self.space.matrix + 2)
        np.testing.assert_array_equal(d0.block(1, 3), self.space.matrix + 1)
        np.testing.assert_array_equal(d0.block(2, 2), self.space.matrix)
        self.assertEqual(d1.stacked_cross().shape, (6, 24))
        self.assertEqual(d1.total_points, 30)
        self.assertEqual(d1.point_id(d1.flat_index(PointId(3, 5))), PointId(3, 5))
        self.assertTrue(dominates(d0, d1))
        self.assertFalse(dominates(d1, d0))

    def test_copies_must_be_positive(self):
        with self.assertRaises(PreconditionError):
            build_multicopy(self.space, 0, 'd1')

    def test_ex10_distances(self):
        """k ≥ n 时 d(x^k_0, x^k_n) = 1；k < n 时为 2k² + n"""
        space = build_multicopy(self.space, 4, 'embed', embedding_coords('ex10', 6, 4))
        for n in range(1, 5):
            for k in range(1, 7):
                expected = 1.0 if k >= n else float(2 * k * k + n)
                self.assertEqual(space.distance(PointId(0, k - 1), PointId(n, k - 1)), expected)
        np.testing.assert_array_equal(space.restriction(0), self.space.matrix)

    def test_ex12_literal_distances(self):
        """按公式原样：k ≥ n 时 d(x^k_0, x^k_n) = 2n + 1"""
        space = build_multicopy(self.space, 4, 'embed', embedding_coords('ex12', 6, 4))
        self.assertEqual(space.distance(PointId(0, 5), PointId(3, 5)), 7.0)
        self.assertEqual(space.distance(PointId(0, 0), PointId(3, 0)), 1.0)

    def test_ex14_requires_phi_bound(self):
        with self.assertRaises(PreconditionError):
            embedding_coords('ex14', 4, 2, phi=lambda k: k + 1)
        with self.assertRaises(PreconditionError):
            embedding_coords('ex99', 4, 2)

    def test_degenerate_embedding(self):
        base = FiniteMetricSpace.from_labels([1, 4])
        coords = EmbeddingCoordinates('ex10', 2, 1, {
            (0, 1): ((0, 1.0),), (0, 2): ((0, 4.0),),
            (1, 1): ((0, 1.0),), (1, 2): ((0, 4.0), (1, 1.0)),
        })
        with self.assertRaises(DegenerateEmbeddingError):
            build_multicopy(base, 1, 'embed', coords)

    def test_validation_skipped_above_limit(self):
        with self.assertLogs('roelab.linking', level='WARNING'):
            build_multicopy(self.space, 4, 'd0', validation_limit=10)


class TestDistortion(unittest.TestCase):
    """经验畸变剖面"""

    def test_d0_versus_d1_signature(self):
        base = squares_space(8)
        for copies in (4, 8):
            d0 = build_multicopy(base, copies, 'd0')
            d1 = build_multicopy(base, copies, 'd1')
            self.assertEqual(distortion_profile(d0, d1)(1), float(copies))

    def test_identity_profile(self):
        base = squares_space(5)
        profile = distortion_profile(base, base)
        np.testing.assert_array_equal(profile.thresholds, profile.values)
        self.assertEqual(profile.evaluate(-1), 0.0)

    def test_point_set_mismatch(self):
        with self.assertRaises(PointSetMismatchError):
            distortion_profile(squares_space(3), squares_space(4))


if __name__ == '__main__':
    unittest.main()
