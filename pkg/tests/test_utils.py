# coding: utf8
""" Unit tests:

- :class:`TestUtils`
"""

import os
import unittest
from unittest import mock

import numpy as np
import numpy.random as rndm

import sys
sys.path.append('..')
from spavs import utils


class TestUtils(unittest.TestCase):
    """ Test
    """
    def test_check_random_state(self):

        rng = np.random.default_rng(0)
        self.assertIs(utils.check_random_state(rng), rng)

        list_of_seeds = [None, 3, np.int64(3), np.random.SeedSequence(3)]
        for idx, seed in enumerate(list_of_seeds):
            with self.subTest(index=idx):
                self.assertIsInstance(utils.check_random_state(seed),
                                      np.random.Generator)

        a = utils.check_random_state(3).standard_normal(5)
        b = utils.check_random_state(3).standard_normal(5)
        self.assertTrue(np.array_equal(a, b))

        with self.assertRaises(ValueError):
            utils.check_random_state('not a seed')

    def test_replication_streams_are_labelled_and_distinct(self):

        labels = [(c, r) for c in range(5) for r in range(40)]
        seeds = [utils.stream_seed(2024, c, r) for c, r in labels]

        self.assertEqual(len(set(seeds)), len(labels))

        x = utils.replication_rng(2024, 1, 7).standard_normal(10)
        y = utils.replication_rng(2024, 1, 7).standard_normal(10)
        z = utils.replication_rng(2024, 7, 1).standard_normal(10)
        self.assertTrue(np.array_equal(x, y))
        self.assertFalse(np.array_equal(x, z))

        with self.assertRaises(ValueError):
            utils.replication_seed_sequence(0, -1, 0)

    def test_symmetric(self):

        N = 20
        X = rndm.randn(N, N)

        list_of_inputs = [(True, None),
                          (False, X),
                          (True, X.T + X),
                          (False, np.ones((N, N + 1)))]

        for idx, (flag, _input) in enumerate(list_of_inputs):
            with self.subTest(index=idx, is_symmetric=flag):

                if flag:
                    self.assertTrue(
                        utils.is_symmetric(_input) is _input)
                else:
                    with self.assertRaises(ValueError):
                        utils.is_symmetric(_input)

        with self.assertRaises(ValueError) as context:
            utils.is_symmetric(X)
        self.assertIn('M.T != M', str(context.exception))

    def test_is_finite(self):

        list_of_inputs = [(True, None),
                          (True, np.zeros(3)),
                          (False, np.array([0.0, np.nan])),
                          (False, np.array([[np.inf]]))]

        for idx, (flag, _input) in enumerate(list_of_inputs):
            with self.subTest(index=idx, is_finite=flag):

                if flag:
                    self.assertTrue(utils.is_finite(_input) is _input)
                else:
                    with self.assertRaises(ValueError):
                        utils.is_finite(_input)

    def test_is_geq_0(self):

        N, tol = 100, 1e-8

        list_of_inputs = [(True, None),
                          (True, np.zeros(N)),
                          (True, -tol * np.ones(N)),
                          (True, rndm.rand(N)),
                          (False, -2 * tol * np.ones(N)),
                          (False, -rndm.rand(N))]

        for idx, (flag, _input) in enumerate(list_of_inputs):
            with self.subTest(index=idx, is_geq_0=flag):

                if flag:
                    self.assertTrue(utils.is_geq_0(_input, tol) is _input)
                else:
                    with self.assertRaises(ValueError) as context:
                        utils.is_geq_0(_input, tol)

                    self.assertIn('not all >= 0', str(context.exception))

    def test_is_in_open_interval(self):

        self.assertEqual(utils.is_in_open_interval(0.25, 0, 0.5), 0.25)

        for value in (0.0, 0.5, -1.0, 2.0):
            with self.subTest(value=value):
                with self.assertRaises(ValueError) as context:
                    utils.is_in_open_interval(value, 0.0, 0.5, 'gamma')
                self.assertIn('gamma', str(context.exception))

    def test_resolve_n_jobs(self):

        with mock.patch.dict(os.environ, {utils.NUM_THREADS_ENV: ''}):
            self.assertEqual(utils.resolve_n_jobs(), 1)
            self.assertEqual(utils.resolve_n_jobs(4), 4)

        with mock.patch.dict(os.environ, {utils.NUM_THREADS_ENV: '3'}):
            self.assertEqual(utils.resolve_n_jobs(), 3)
            self.assertEqual(utils.resolve_n_jobs(2), 2)

        with mock.patch.dict(os.environ, {utils.NUM_THREADS_ENV: 'many'}):
            with self.assertRaises(ValueError):
                utils.resolve_n_jobs()

        with self.assertRaises(ValueError):
            utils.resolve_n_jobs(0)

    def test_progress_bar_counts_updates(self):

        pbar = utils.get_progress_bar(total=3, disable=True)
        for _ in range(3):
            pbar.update(1)
        pbar.close()


def main():

    unittest.main()


if __name__ == '__main__':
    main()
