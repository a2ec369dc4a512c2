# coding: utf8
""" Unit tests:

- :class:`TestIndexSet`, validation and set operations
- :class:`TestLinalgKernel`, tensor product, Hilbert-Schmidt norm and restricted projector :math:`\\Pi_K`
"""

import unittest

import numpy as np

import sys
sys.path.append('..')

from spavs.exceptions import SingularSubmatrix
from spavs.linalg_kernel import (IndexSet,
                                 hs_norm,
                                 outer_product,
                                 restricted_projector)


def random_spd(p, rng):
    A = rng.standard_normal((p, p))
    return A.dot(A.T) + np.eye(p)


def random_subset(p, rng):
    size = rng.integers(1, p + 1)
    return IndexSet(rng.choice(np.arange(1, p + 1), size=size, replace=False), p)


class TestIndexSet(unittest.TestCase):

    def test_members_are_sorted_one_based(self):

        K = IndexSet([3, 1], 4)
        self.assertEqual(K.members, (1, 3))
        self.assertTrue(np.array_equal(K.zero_based, [0, 2]))
        self.assertEqual(str(K), '{1, 3}')
        self.assertEqual(K, {1, 3})
        self.assertIn(3, K)
        self.assertEqual(len(K), 2)

    def test_invalid_members(self):

        list_of_inputs = [([1, 1], 3),
                          ([0, 1], 3),
                          ([4], 3),
                          ([], 3)]

        for idx, (members, p) in enumerate(list_of_inputs):
            with self.subTest(index=idx, members=members):
                with self.assertRaises(ValueError):
                    IndexSet(members, p)

        self.assertEqual(len(IndexSet([], 3, allow_empty=True)), 0)

    def test_set_operations(self):

        full = IndexSet.full(4)
        self.assertEqual(full.without(2), IndexSet([1, 3, 4], 4))
        self.assertEqual(IndexSet([1, 3], 4).complement(), IndexSet([2, 4], 4))
        self.assertTrue(IndexSet([1, 3], 4).issubset(full))
        self.assertFalse(full.issubset(IndexSet([1, 3], 4)))


class TestLinalgKernel(unittest.TestCase):

    seed = 0
    nb_instances = 500

    def test_outer_product_examples(self):

        list_of_inputs = [([1, 0], [1, 0], [[1, 0], [0, 0]]),
                          ([1, 2], [3], [[3, 6]]),
                          ([0, 0, 0], [1, 2], np.zeros((2, 3)))]

        for idx, (u, v, expected) in enumerate(list_of_inputs):
            with self.subTest(index=idx):
                self.assertTrue(np.array_equal(outer_product(u, v), expected))

    def test_outer_product_applies_inner_product(self):

        rng = np.random.default_rng(self.seed)
        u, v, h = rng.standard_normal((3, 4))

        self.assertTrue(np.allclose(outer_product(u, v).dot(h), u.dot(h) * v))

    def test_outer_product_has_rank_at_most_one(self):

        rng = np.random.default_rng(self.seed)
        for _ in range(50):
            u, v = rng.standard_normal((2, 5))
            M = outer_product(u / np.linalg.norm(u), v / np.linalg.norm(v))
            minors = M[:-1, :-1] * M[1:, 1:] - M[:-1, 1:] * M[1:, :-1]
            self.assertTrue(np.all(np.abs(minors) < 1e-12))

    def test_hs_norm_examples(self):

        list_of_inputs = [(np.eye(2), np.sqrt(2)),
                          ([[0], [1]], 1.0),
                          ([[3, 4]], 5.0)]

        for idx, (M, expected) in enumerate(list_of_inputs):
            with self.subTest(index=idx):
                self.assertAlmostEqual(hs_norm(M), expected, places=15)

    def test_hs_norm_transpose_invariance(self):

        rng = np.random.default_rng(self.seed)
        for _ in range(100):
            M = rng.standard_normal(rng.integers(1, 6, size=2))
            self.assertAlmostEqual(hs_norm(M), hs_norm(M.T),
                                   delta=1e-14 * hs_norm(M))

    def test_hs_norm_rejects_non_finite(self):

        with self.assertRaises(ValueError):
            hs_norm([[np.nan, 1.0]])

    def test_restricted_projector_examples(self):

        V1 = np.diag([2.0, 1.0])
        self.assertTrue(np.allclose(restricted_projector(IndexSet([1], 2), V1),
                                    [[0.5, 0.0], [0.0, 0.0]]))

        rng = np.random.default_rng(self.seed)
        V1 = random_spd(4, rng)
        self.assertTrue(np.allclose(restricted_projector(IndexSet.full(4), V1),
                                    np.linalg.inv(V1)))

    def test_restricted_projector_singular_block(self):

        V1 = np.diag([1.0, 0.0, 2.0])
        with self.assertRaises(SingularSubmatrix):
            restricted_projector(IndexSet([1, 2], 3), V1)

        # the singular coordinate is harmless outside K
        Pi = restricted_projector(IndexSet([1, 3], 3), V1)
        self.assertTrue(np.allclose(Pi, np.diag([1.0, 0.0, 0.5])))

    def test_restricted_projector_rejects_mismatched_sizes(self):

        with self.assertRaises(ValueError):
            restricted_projector(IndexSet([1], 3), np.eye(2))
        with self.assertRaises(ValueError):
            restricted_projector(IndexSet([], 2, allow_empty=True), np.eye(2))

    def test_restricted_projector_is_generalized_inverse(self):
        """:math:`\\Pi_K V_1 \\Pi_K = \\Pi_K` on random SPD matrices and random sets"""

        rng = np.random.default_rng(self.seed)
        for _ in range(self.nb_instances):
            p = rng.integers(1, 9)
            V1 = random_spd(p, rng)
            K = random_subset(p, rng)

            Pi = restricted_projector(K, V1)
            self.assertLessEqual(hs_norm(Pi.dot(V1).dot(Pi) - Pi),
                                 1e-9 * hs_norm(Pi))

    def test_full_projector_inverts_V1(self):

        rng = np.random.default_rng(self.seed)
        for _ in range(100):
            p = rng.integers(1, 9)
            V1 = random_spd(p, rng)
            Pi = restricted_projector(IndexSet.full(p), V1)
            self.assertTrue(np.all(np.abs(Pi.dot(V1) - np.eye(p)) < 1e-9))


def main():

    unittest.main()


if __name__ == '__main__':
    main()
