# coding: utf8
""" Penalized least squares comparators for the selection of relevant covariates, restricted to univariate responses :math:`q=1`

.. math::

    \\min_{b\\in\\mathbb{R}^p} \\frac{1}{2N}\\sum_{\\mathbf{i}} (y_{\\mathbf{i}} - b^{\\top}x_{\\mathbf{i}})^2
        + \\sum_{j=1}^p p_{\\lambda}(|b_j|),

with :math:`N=n^d` centered observations and penalty :math:`p_{\\lambda}` among

- ``'lasso'``: :math:`\\lambda t`, solved by cyclic coordinate descent
- ``'scad'``: smoothly clipped absolute deviation with shape :math:`a>2`
- ``'hard'``: hard thresholding penalty :math:`\\lambda^2 - (t-\\lambda)^2 1_{t<\\lambda}`

The nonconvex penalties are handled by local linear approximation started at the lasso solution:
each outer iteration solves a weighted lasso with weights :math:`p_{\\lambda}'(|b_j|)`.
The regularization :math:`\\lambda` is chosen by BIC over a logarithmic grid.

.. seealso:

    `Documentation <docs/tuning/index.rst>`_
"""

from collections import namedtuple

import numpy as np

from spavs.exceptions import NotUnivariateResponse
from spavs.linalg_kernel import IndexSet
from spavs.utils import is_geq_0

PENALTY_KINDS = ('lasso', 'scad', 'hard')


class PenaltySpec:
    """ Penalty :math:`p_{\\lambda}` of the comparators

    :param kind:
        One of ``'lasso'``, ``'scad'``, ``'hard'``
    :param lam:
        Regularization :math:`\\lambda\\geq 0`
    :param scad_a:
        SCAD shape :math:`a>2`
    :type scad_a:
        float, default 3.7
    """

    def __init__(self, kind, lam=0.0, scad_a=3.7):

        kind = str(kind).lower()
        if kind not in PENALTY_KINDS:
            err_print = ['Invalid penalty `kind`, choose among:',
                         ', '.join(PENALTY_KINDS),
                         'Given: {}'.format(kind)]
            raise ValueError('\n'.join(err_print))
        if not lam >= 0:
            raise ValueError('lambda must be >= 0. Given: {}'.format(lam))
        if not scad_a > 2:
            raise ValueError('SCAD shape must be > 2. Given: {}'.format(scad_a))

        self.kind = kind
        self.lam = float(lam)
        self.scad_a = float(scad_a)

    def with_lambda(self, lam):
        return PenaltySpec(self.kind, lam, self.scad_a)

    def __repr__(self):
        return 'PenaltySpec({!r}, lam={}, scad_a={})'.format(self.kind, self.lam,
                                                              self.scad_a)


def penalty_value(t, spec):
    """ Evaluate :math:`p_{\\lambda}(t)` for :math:`t\\geq 0`, vectorized
    """
    t = np.abs(np.asarray(t, dtype=float))
    lam = spec.lam

    if spec.kind == 'lasso':
        return lam * t

    if spec.kind == 'hard':
        return lam**2 - np.where(t < lam, (t - lam)**2, 0.0)

    a = spec.scad_a
    return np.where(t <= lam,
                    lam * t,
                    np.where(t <= a * lam,
                             (2 * a * lam * t - t**2 - lam**2) / (2 * (a - 1)),
                             0.5 * (a + 1) * lam**2))


def penalty_derivative(t, spec):
    """ Evaluate :math:`p_{\\lambda}'(t)` for :math:`t\\geq 0`, the weights of the local linear approximation

    - lasso: :math:`\\lambda`
    - SCAD: :math:`\\lambda\\left\\{1_{t\\leq\\lambda} + \\frac{(a\\lambda - t)_+}{(a-1)\\lambda}1_{t>\\lambda}\\right\\}`
    - hard: :math:`2(\\lambda - t)_+`
    """
    t = np.abs(np.asarray(t, dtype=float))
    lam = spec.lam

    if spec.kind == 'lasso':
        return np.full_like(t, lam)

    if spec.kind == 'hard':
        return 2.0 * np.maximum(lam - t, 0.0)

    if lam == 0:
        return np.zeros_like(t)
    a = spec.scad_a
    return np.where(t <= lam, lam, np.maximum(a * lam - t, 0.0) / (a - 1))


def soft_threshold(x, t):
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def lasso_objective(beta, x, y, lam):
    """:math:`\\frac{1}{2N}\\|y - xb\\|^2 + \\sum_j \\lambda_j |b_j|`"""
    r = y - x.dot(beta)
    return 0.5 * r.dot(r) / len(y) + np.sum(lam * np.abs(beta))


def lambda_max(x, y):
    """ Smallest :math:`\\lambda` for which the lasso solution vanishes, :math:`\\max_j |\\widehat{\\operatorname{cov}}(x_j, y)|`
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    xc, yc = x - x.mean(axis=0), y - y.mean()

    return float(np.max(np.abs(xc.T.dot(yc))) / len(y))


def lasso_coordinate_descent(x, y, lam, beta0=None, tol=1e-8, max_iter=10000):
    """ Cyclic coordinate descent for the weighted lasso

    .. math::

        \\min_b \\frac{1}{2N}\\|y - xb\\|^2 + \\sum_j \\lambda_j |b_j|

    :param x:
        :math:`N\\times p` design, assumed centered
    :param y:
        Response of size :math:`N`, assumed centered
    :param lam:
        Common :math:`\\lambda\\geq 0` or one :math:`\\lambda_j\\geq 0` per coordinate
    :type lam:
        float or array_like

    :param beta0:
        Warm start, zero by default

    :param tol:
        Sweeps stop when no coefficient moves more than ``tol``

    :return:
        Coefficients and the objective recorded before the first sweep and after each sweep
    :rtype:
        tuple(array_like, array_like)
    """
    N, p = x.shape
    lam = is_geq_0(np.broadcast_to(np.asarray(lam, dtype=float), (p,)), tol=0.0)

    beta = np.zeros(p) if beta0 is None else np.array(beta0, dtype=float)
    col_ss = np.sum(x**2, axis=0) / N
    r = y - x.dot(beta)

    fhist = [lasso_objective(beta, x, y, lam)]
    for _ in range(max_iter):
        max_step = 0.0
        for j in range(p):
            if col_ss[j] == 0:
                new = 0.0
            else:
                rho = x[:, j].dot(r) / N + col_ss[j] * beta[j]
                new = soft_threshold(rho, lam[j]) / col_ss[j]
            step = new - beta[j]
            if step != 0:
                r -= step * x[:, j]
                beta[j] = new
                max_step = max(max_step, abs(step))

        fhist.append(lasso_objective(beta, x, y, lam))
        if max_step < tol:
            break

    return beta, np.array(fhist)


def _center_univariate(sample):

    if sample.q != 1:
        raise NotUnivariateResponse('penalized least squares comparators need q=1.'
                                    ' Given: q={}'.format(sample.q))

    x = sample.x - sample.x.mean(axis=0)
    y = sample.y[:, 0] - sample.y[:, 0].mean()

    return x, y


def _lla(x, y, spec, beta_lasso, tol, max_outer):
    # local linear approximation of a nonconvex penalty from the lasso solution
    beta = beta_lasso.copy()
    for _ in range(max_outer):
        weights = penalty_derivative(beta, spec)
        new, _ = lasso_coordinate_descent(x, y, weights, beta0=beta, tol=tol)
        converged = np.max(np.abs(new - beta)) < tol
        beta = new
        if converged:
            break

    return beta


def penalized_ls_path(sample, kind, lambda_grid, scad_a=3.7, tol=1e-8, max_outer=20):
    """ Solve the penalized least squares problem for each :math:`\\lambda` of a grid, with warm starts along the grid

    :param sample:
        Spatial sample with univariate response
    :type sample:
        :class:`~spavs.estimation.SpatialSample`

    :param kind:
        ``'lasso'``, ``'scad'`` or ``'hard'``

    :param lambda_grid:
        Values :math:`\\lambda\\geq 0`, visited in the given order (decreasing order makes warm starts effective)
    :type lambda_grid:
        array_like

    :param max_outer:
        Maximal number of local linear approximation steps for ``'scad'`` and ``'hard'``

    :return:
        Coefficients, one row per :math:`\\lambda`
    :rtype:
        array_like

    :raises NotUnivariateResponse:
        if :math:`q>1`
    """
    x, y = _center_univariate(sample)
    spec = PenaltySpec(kind, scad_a=scad_a)

    coefs = np.zeros((len(lambda_grid), sample.p))
    beta_lasso = np.zeros(sample.p)
    for k, lam in enumerate(lambda_grid):
        beta_lasso, _ = lasso_coordinate_descent(x, y, lam, beta0=beta_lasso, tol=tol)
        if spec.kind == 'lasso':
            coefs[k] = beta_lasso
        else:
            coefs[k] = _lla(x, y, spec.with_lambda(lam), beta_lasso, tol, max_outer)

    return coefs


BaselineFit = namedtuple('BaselineFit', ('selected', 'coef', 'lam', 'bic', 'lambda_grid', 'bic_path'))
BaselineFit.__doc__ = """Output of :func:`baseline_fit`: support ``selected`` of the BIC-optimal coefficients ``coef`` at ``lam``, and the BIC along the whole grid."""


def bic(rss, df, N):
    """:math:`N\\log(RSS/N) + df\\log N`, with the residual sum of squares floored at the smallest positive float"""
    rss = np.maximum(rss, np.finfo(float).tiny)
    return N * np.log(rss / N) + df * np.log(N)


def baseline_fit(sample, kind, n_lambdas=50, min_ratio=1e-4, scad_a=3.7):
    """ Fit a comparator with :math:`\\lambda` chosen by BIC on the grid of ``n_lambdas`` values spaced logarithmically
    from :func:`lambda_max` down to ``min_ratio`` times it. Ties are broken by the largest :math:`\\lambda`.

    :rtype:
        :class:`BaselineFit`
    """
    x, y = _center_univariate(sample)
    N = len(y)

    lam_max = lambda_max(sample.x, sample.y[:, 0])
    if lam_max == 0:
        lambda_grid = np.zeros(1)
    else:
        lambda_grid = lam_max * np.logspace(0, np.log10(min_ratio), n_lambdas)

    coefs = penalized_ls_path(sample, kind, lambda_grid, scad_a=scad_a)

    rss = np.sum((y[:, None] - x.dot(coefs.T))**2, axis=0)
    df = np.count_nonzero(coefs, axis=1)
    bic_path = bic(rss, df, N)

    best = int(np.argmin(bic_path))
    selected = IndexSet(np.flatnonzero(coefs[best]) + 1, sample.p, allow_empty=True)

    return BaselineFit(selected=selected, coef=coefs[best], lam=lambda_grid[best],
                       bic=bic_path[best], lambda_grid=lambda_grid,
                       bic_path=bic_path)


def baseline_select(sample, kind, n_lambdas=50, min_ratio=1e-4, scad_a=3.7):
    """ Covariates selected by a penalized least squares comparator tuned by BIC

    :param sample:
        Spatial sample with :math:`q=1`
    :type sample:
        :class:`~spavs.estimation.SpatialSample`

    :param kind:
        ``'lasso'``, ``'scad'`` or ``'hard'``

    :return:
        Support of the BIC-optimal solution, possibly empty
    :rtype:
        :class:`~spavs.linalg_kernel.IndexSet`

    .. seealso::

        - :func:`baseline_fit`
    """
    return baseline_fit(sample, kind, n_lambdas, min_ratio, scad_a).selected
