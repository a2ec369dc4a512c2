# coding: utf8
""" Unit tests:

- :class:`TestTuningGrid`
- :class:`TestRestrictedOLS`
- :class:`TestCrossValidation`, the index :math:`CV(\\gamma, \\beta)` and its minimization
"""

import os
import tempfile
import unittest
import warnings

import numpy as np
import pandas as pd
from sklearn.model_selection import KFold, LeaveOneOut

import sys
sys.path.append('..')

from spavs.estimation import SpatialSample
from spavs.exceptions import AllFoldsFailed, FoldTooSmall
from spavs.linalg_kernel import IndexSet
from spavs.simulator import SimulationConfig, generate_dataset
from spavs.tuning import (TuningGrid,
                          cv_score,
                          fit_restricted_ols,
                          optimize_tuning,
                          predict_restricted_ols,
                          write_cv_table)


class TestTuningGrid(unittest.TestCase):

    def test_default_grid(self):

        grid = TuningGrid()
        self.assertEqual(len(grid), 25)
        self.assertEqual(grid.points()[:2], [(0.05, 0.05), (0.05, 0.15)])
        self.assertEqual(grid.points()[-1], (0.45, 0.45))

    def test_invalid_grids(self):

        list_of_inputs = [dict(gamma_values=[0.0, 0.2]),
                          dict(beta_values=[0.5]),
                          dict(gamma_values=[]),
                          dict(folds=1),
                          dict(folds='kfold')]

        for idx, params in enumerate(list_of_inputs):
            with self.subTest(index=idx, params=str(params)):
                with self.assertRaises(ValueError):
                    TuningGrid(**params)

    def test_splitters(self):

        self.assertIsInstance(TuningGrid().splitter(256), LeaveOneOut)
        self.assertIsInstance(TuningGrid(folds='loo').splitter(1000), LeaveOneOut)

        splitter = TuningGrid().splitter(257)
        self.assertIsInstance(splitter, KFold)
        self.assertEqual(splitter.get_n_splits(), 10)

        self.assertEqual(TuningGrid(folds='4').splitter(16).get_n_splits(), 4)


class TestRestrictedOLS(unittest.TestCase):

    def test_exact_fit(self):

        rng = np.random.default_rng(0)
        x = rng.standard_normal((30, 4))
        y = 2.0 + x[:, [0, 2]].dot([1.0, -3.0])

        fit = fit_restricted_ols(x, y, IndexSet([1, 3], 4))
        self.assertTrue(np.allclose(fit.intercept, [2.0]))
        self.assertTrue(np.allclose(fit.coef.ravel(), [1.0, -3.0]))
        self.assertTrue(np.allclose(predict_restricted_ols(fit, x).ravel(), y))

    def test_intercept_only(self):

        rng = np.random.default_rng(0)
        x, y = rng.standard_normal((20, 3)), rng.standard_normal((20, 2))

        fit = fit_restricted_ols(x, y, IndexSet([], 3, allow_empty=True))
        self.assertEqual(fit.coef.shape, (0, 2))
        self.assertTrue(np.allclose(predict_restricted_ols(fit, x[:2]),
                                    np.tile(y.mean(axis=0), (2, 1))))


class TestCrossValidation(unittest.TestCase):

    seed = 0

    def test_noiseless_model_predicts_exactly(self):

        cfg = SimulationConfig(n=8, a=np.inf, kappa2=0.0)
        sample = generate_dataset(cfg, random_state=self.seed)

        cv = cv_score(sample, 0.25, 0.25, folds='loo')
        self.assertLess(cv, 1e-12 * np.var(sample.y))

    def test_constant_response(self):

        sample = generate_dataset(SimulationConfig(n=4, seed=1))
        sample = SpatialSample(sample.x, np.ones(16), grid_side=4)

        self.assertLess(cv_score(sample, 0.25, 0.25), 1e-20)

    def test_ties_return_first_grid_point(self):

        sample = generate_dataset(SimulationConfig(n=4, seed=1))
        sample = SpatialSample(sample.x, np.ones(16), grid_side=4)

        grid = TuningGrid(gamma_values=[0.3, 0.1], beta_values=[0.2, 0.4])
        res = optimize_tuning(sample, grid, n_jobs=1)

        self.assertEqual((res.gamma_opt, res.beta_opt), (0.3, 0.2))
        self.assertEqual(res.cv_table['cv'].nunique(), 1)

    def test_fold_too_small(self):

        rng = np.random.default_rng(self.seed)
        sample = SpatialSample(rng.standard_normal((4, 3)), rng.standard_normal(4),
                               grid_side=2)

        with self.assertRaises(FoldTooSmall):
            cv_score(sample, 0.25, 0.25)

    def test_site_order_does_not_matter(self):

        sample = generate_dataset(SimulationConfig(n=6, a=25, kappa2=1.0, seed=4))
        order = np.random.default_rng(self.seed).permutation(sample.n_sites)
        shuffled = SpatialSample(sample.x[order], sample.y[order], grid_side=6)

        cv, cv_shuffled = cv_score(sample, 0.15, 0.35), cv_score(shuffled, 0.15, 0.35)
        self.assertAlmostEqual(cv, cv_shuffled, delta=1e-9 * cv)

    def test_single_point_grid(self):

        sample = generate_dataset(SimulationConfig(n=5, seed=2))
        grid = TuningGrid(gamma_values=[0.2], beta_values=[0.3])

        res = optimize_tuning(sample, grid)
        self.assertEqual((res.gamma_opt, res.beta_opt), (0.2, 0.3))
        self.assertEqual(len(res.cv_table), 1)
        self.assertAlmostEqual(res.cv_table['cv'][0], cv_score(sample, 0.2, 0.3))

    def test_optimum_is_grid_minimum(self):

        sample = generate_dataset(SimulationConfig(n=5, kappa2=2.0, seed=5))
        grid = TuningGrid(gamma_values=[0.05, 0.45], beta_values=[0.05, 0.25, 0.45])

        res = optimize_tuning(sample, grid)
        table = res.cv_table
        self.assertEqual(list(table.columns), ['gamma', 'beta', 'cv', 'failed_folds'])
        self.assertEqual(len(table), 6)

        best = table['cv'].min()
        row = table[(table['gamma'] == res.gamma_opt) & (table['beta'] == res.beta_opt)]
        self.assertEqual(row['cv'].iloc[0], best)

    def test_table_entries_match_cv_score(self):

        sample = generate_dataset(SimulationConfig(n=5, kappa2=2.0, seed=5))
        grid = TuningGrid(gamma_values=[0.05, 0.45], beta_values=[0.05, 0.45], folds=5)
        table = optimize_tuning(sample, grid, n_jobs=1).cv_table

        for g, b, cv, failed in table.itertuples(index=False):
            with self.subTest(gamma=g, beta=b):
                self.assertEqual(cv_score(sample, g, b, folds=5, return_failed=True),
                                 (cv, failed))

    def test_thread_count_does_not_change_results(self):

        sample = generate_dataset(SimulationConfig(n=5, seed=6))
        grid = TuningGrid(gamma_values=[0.1, 0.3], beta_values=[0.1, 0.3])

        res_1 = optimize_tuning(sample, grid, n_jobs=1)
        res_3 = optimize_tuning(sample, grid, n_jobs=3)

        pd.testing.assert_frame_equal(res_1.cv_table, res_3.cv_table)
        self.assertEqual((res_1.gamma_opt, res_1.beta_opt),
                         (res_3.gamma_opt, res_3.beta_opt))

    def test_collinear_covariates_fail_every_fold(self):

        sample = generate_dataset(SimulationConfig(n=4, seed=7))
        x = sample.x.copy()
        x[:, 1] = x[:, 0]
        sample = SpatialSample(x, sample.y, grid_side=4)

        with self.assertRaises(AllFoldsFailed):
            cv_score(sample, 0.25, 0.25)

        with warnings.catch_warnings():
            warnings.simplefilter('ignore')
            with self.assertRaises(AllFoldsFailed):
                optimize_tuning(sample, TuningGrid(gamma_values=[0.2],
                                                   beta_values=[0.2, 0.3]))

    def test_write_cv_table(self):

        sample = generate_dataset(SimulationConfig(n=4, seed=8))
        res = optimize_tuning(sample, TuningGrid(gamma_values=[0.2, 0.4],
                                                 beta_values=[0.3]))

        with tempfile.TemporaryDirectory() as tmp:
            path = write_cv_table(res.cv_table, os.path.join(tmp, 'cv.csv'))
            with open(path) as f:
                header = f.readline().strip()
            table = pd.read_csv(path)

        self.assertEqual(header, 'gamma,beta,cv,failed_folds')
        self.assertTrue(np.array_equal(table['cv'].to_numpy(),
                                       res.cv_table['cv'].to_numpy()))


def main():

    unittest.main()


if __name__ == '__main__':
    main()
