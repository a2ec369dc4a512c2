# coding: utf8
""" Cross-validated choice of the penalization exponents :math:`(\\gamma, \\beta)`

.. math::

    (\\gamma_{opt}, \\beta_{opt}) = \\arg\\min_{(\\gamma,\\beta)\\in ]0,1/2[^2}
        CV(\\gamma,\\beta),
    \\quad
    CV(\\gamma,\\beta) = \\frac{1}{n^d}\\sum_{\\ell} \\left\\|Y_{\\ell} - \\widehat{Y}_{\\ell}\\right\\|^2,

where :math:`\\widehat{Y}_{\\ell}` is predicted by an ordinary least squares fit, with intercept, of :math:`Y` on the covariates selected without the held-out sites.

.. seealso:

    `Documentation <docs/tuning/index.rst>`_
"""

import warnings
from collections import namedtuple

import numpy as np
import scipy.linalg as la
import pandas as pd
from joblib import Parallel, delayed
from sklearn.model_selection import KFold, LeaveOneOut

from spavs.estimation import cov_pair_from_arrays
from spavs.exceptions import AllFoldsFailed, FoldTooSmall, SingularSubmatrix
from spavs.linalg_kernel import IndexSet
from spavs.selection import PenaltyConfig, select_from_covariance
from spavs.utils import is_in_open_interval, resolve_n_jobs

DEFAULT_EXPONENTS = (0.05, 0.15, 0.25, 0.35, 0.45)
# grids with at most this many sites are cross-validated leave-one-out by default
LOO_MAX_SITES = 256
DEFAULT_K_FOLDS = 10

CV_TABLE_COLUMNS = ('gamma', 'beta', 'cv', 'failed_folds')


class TuningGrid:
    """ Search domain of :math:`(\\gamma, \\beta)` and cross-validation scheme

    :param gamma_values:
        Candidate :math:`\\gamma`, all in :math:`]0, 1/2[`
    :type gamma_values:
        list, default :math:`\\{0.05, 0.15, 0.25, 0.35, 0.45\\}`

    :param beta_values:
        Candidate :math:`\\beta`, all in :math:`]0, 1/2[`
    :type beta_values:
        list, default :math:`\\{0.05, 0.15, 0.25, 0.35, 0.45\\}`

    :param folds:
        - ``None``: leave-one-out when the grid has at most 256 sites, 10-fold otherwise
        - ``'loo'``: leave-one-out
        - ``int`` :math:`\\geq 2`: number of contiguous folds
    :type folds:
        None, string or int
    """

    def __init__(self, gamma_values=DEFAULT_EXPONENTS, beta_values=DEFAULT_EXPONENTS,
                 folds=None):

        self.gamma_values = self._check_values(gamma_values, 'gamma')
        self.beta_values = self._check_values(beta_values, 'beta')

        if folds is None or folds == 'loo':
            self.folds = folds
        else:
            try:
                self.folds = int(folds)
            except (TypeError, ValueError):
                self.folds = -1
            if self.folds < 2:
                err_print = ['Invalid `folds`, choose among:',
                             '- None: leave-one-out up to {} sites, {}-fold otherwise'
                             .format(LOO_MAX_SITES, DEFAULT_K_FOLDS),
                             '- `loo`: leave-one-out',
                             '- an integer >= 2',
                             'Given: {}'.format(folds)]
                raise ValueError('\n'.join(err_print))

    @staticmethod
    def _check_values(values, name):
        values = [float(v) for v in np.atleast_1d(values)]
        if not values:
            raise ValueError('empty list of candidate {} values'.format(name))
        for v in values:
            is_in_open_interval(v, 0.0, 0.5, name)
        return tuple(values)

    def points(self):
        """Grid points :math:`(\\gamma, \\beta)` in row-major order, :math:`\\gamma` varying slowest"""
        return [(g, b) for g in self.gamma_values for b in self.beta_values]

    def splitter(self, n_sites):
        """scikit-learn cross-validator matching :py:attr:`folds` for a sample of ``n_sites`` sites"""
        folds = self.folds
        if folds is None:
            folds = 'loo' if n_sites <= LOO_MAX_SITES else DEFAULT_K_FOLDS
        if folds == 'loo':
            return LeaveOneOut()
        return KFold(n_splits=folds)

    def __len__(self):
        return len(self.gamma_values) * len(self.beta_values)

    def __str__(self):
        str_info = ['Cross-validation grid of {} points'.format(len(self)),
                    '- gamma in {}'.format(list(self.gamma_values)),
                    '- beta in {}'.format(list(self.beta_values)),
                    '- folds = {}'.format('auto' if self.folds is None else self.folds)]

        return '\n'.join(str_info)


RestrictedOLS = namedtuple('RestrictedOLS', ('intercept', 'coef', 'selected'))
RestrictedOLS.__doc__ = """Least squares fit of :math:`Y` on the covariates of ``selected``: intercept (size q) and coefficients (:math:`|K|\\times q`)."""

TuningResult = namedtuple('TuningResult', ('gamma_opt', 'beta_opt', 'cv_table'))


def fit_restricted_ols(x, y, selected):
    """ Ordinary least squares with intercept of ``y`` on the columns ``selected`` of ``x``

    :param x:
        :math:`N\\times p` covariates
    :param y:
        :math:`N\\times q` responses
    :param selected:
        Covariates kept, possibly empty (intercept only)
    :type selected:
        :class:`~spavs.linalg_kernel.IndexSet`

    :rtype:
        :class:`RestrictedOLS`
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y[:, None]

    idx = selected.zero_based
    design = np.column_stack([np.ones(len(x)), x[:, idx]])
    sol, _, _, _ = la.lstsq(design, y, check_finite=False)

    return RestrictedOLS(intercept=sol[0], coef=sol[1:], selected=selected)


def predict_restricted_ols(fit, x):
    """:math:`\\widehat{Y} = \\widehat{b}_0 + \\widehat{B}_K x_K` for each row of ``x``"""
    x = np.asarray(x, dtype=float)
    return fit.intercept + x[:, fit.selected.zero_based].dot(fit.coef)


def _score_folds(sample, pen, splitter):

    x, y = sample.x, sample.y
    n, d = sample.grid_side, sample.grid_dim

    sq_err, n_evaluated, failed = 0.0, 0, 0
    for train, test in splitter.split(x):
        if len(train) < sample.p + 1:
            err_print = ['training fold keeps {} sites, at least p+1 = {} are needed'
                         .format(len(train), sample.p + 1),
                         'Given: {} sites split by {}'.format(sample.n_sites, splitter)]
            raise FoldTooSmall('\n'.join(err_print))

        try:
            cov = cov_pair_from_arrays(x[train], y[train])
            # rates n^{-d gamma}, n^{-d beta} of the whole grid
            result = select_from_covariance(cov, pen, n, d)
        except SingularSubmatrix:
            failed += 1
            continue

        fit = fit_restricted_ols(x[train], y[train], result.i1_hat)
        sq_err += np.sum((y[test] - predict_restricted_ols(fit, x[test]))**2)
        n_evaluated += len(test)

    return sq_err, n_evaluated, failed


def _grid_point(sample, gamma, beta, folds, pen):
    # CV and number of skipped folds, nan when every fold failed
    if pen is None:
        pen = PenaltyConfig()
    pen = pen.with_exponents(gamma, beta)

    splitter = TuningGrid(folds=folds).splitter(sample.n_sites)
    sq_err, n_evaluated, failed = _score_folds(sample, pen, splitter)

    if not n_evaluated:
        return np.nan, failed
    return sq_err / n_evaluated, failed


def cv_score(sample, gamma, beta, folds=None, pen=None, return_failed=False):
    """ Cross-validation index :math:`CV(\\gamma, \\beta)`, the average squared prediction error of held-out sites

    :param sample:
        Spatial sample
    :type sample:
        :class:`~spavs.estimation.SpatialSample`

    :param gamma, beta:
        Penalization exponents in :math:`]0, 1/2[`

    :param folds:
        See :class:`TuningGrid`
    :type folds:
        None, string or int

    :param pen:
        Provides the penalty functions and the dimension penalty mode, its exponents are replaced by ``gamma, beta``
    :type pen:
        :class:`~spavs.selection.PenaltyConfig`, default None

    :param return_failed:
        Also return the number of folds skipped because of a singular block of :math:`\\widehat{V}_1`
    :type return_failed:
        bool, default False

    :return:
        :math:`CV\\geq 0`, averaged over the sites of the folds that did not fail
    :rtype:
        float (, int)

    :raises FoldTooSmall:
        if a training fold keeps fewer than :math:`p+1` sites
    :raises AllFoldsFailed:
        if no fold could be evaluated
    """
    cv, failed = _grid_point(sample, gamma, beta, folds, pen)

    if np.isnan(cv):
        raise AllFoldsFailed('all {} folds failed for gamma={}, beta={}'
                             .format(failed, gamma, beta))
    if failed:
        warnings.warn('{} cross-validation folds skipped (singular covariance block)'
                      ' for gamma={}, beta={}'.format(failed, gamma, beta))

    return (cv, failed) if return_failed else cv


def optimize_tuning(sample, grid=None, pen=None, n_jobs=None):
    """ Minimize :math:`CV(\\gamma, \\beta)` over a grid

    :param sample:
        Spatial sample
    :type sample:
        :class:`~spavs.estimation.SpatialSample`

    :param grid:
        Search domain, default :class:`TuningGrid` ``()``
    :type grid:
        :class:`TuningGrid`

    :param n_jobs:
        Number of threads evaluating grid points, see :func:`~spavs.utils.resolve_n_jobs`

    :return:
        ``(gamma_opt, beta_opt, cv_table)``, the first minimizer in row-major grid order and the table with columns ``gamma, beta, cv, failed_folds``
    :rtype:
        :class:`TuningResult`

    :raises AllFoldsFailed:
        if every grid point failed

    .. seealso::

        - :func:`cv_score`
        - :func:`write_cv_table`
    """
    if grid is None:
        grid = TuningGrid()

    points = grid.points()
    scores = Parallel(n_jobs=resolve_n_jobs(n_jobs), prefer='threads')(
        delayed(_grid_point)(sample, g, b, grid.folds, pen) for g, b in points)

    cv_table = pd.DataFrame({'gamma': [g for g, _ in points],
                             'beta': [b for _, b in points],
                             'cv': [cv for cv, _ in scores],
                             'failed_folds': [f for _, f in scores]},
                            columns=list(CV_TABLE_COLUMNS))

    if cv_table['cv'].isna().all():
        raise AllFoldsFailed('every fold of every grid point failed')
    if cv_table['failed_folds'].any():
        warnings.warn('{} cross-validation folds skipped over the grid'
                      .format(int(cv_table['failed_folds'].sum())))

    best = int(np.nanargmin(cv_table['cv'].to_numpy()))

    return TuningResult(gamma_opt=float(cv_table['gamma'][best]),
                        beta_opt=float(cv_table['beta'][best]),
                        cv_table=cv_table)


def write_cv_table(cv_table, path):
    """Write the table of :func:`optimize_tuning` as CSV with header ``gamma,beta,cv,failed_folds``"""
    cv_table.loc[:, list(CV_TABLE_COLUMNS)].to_csv(path, index=False,
                                                  float_format='%.17g')
    return path
