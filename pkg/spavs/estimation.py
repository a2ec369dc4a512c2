# coding: utf8
""" Empirical covariance operators of a spatial sample and the criterion

.. math::

    \\xi_K = \\left\\| V_{12} - V_1 \\Pi_K V_{12} \\right\\|_{\\mathcal{H}},

which vanishes if and only if the relevant set :math:`I_1` is contained in :math:`K`.

- :class:`SpatialSample`, observations :math:`(X_{\\mathbf{i}}, Y_{\\mathbf{i}})` on the grid :math:`\\{1, \\dots, n\\}^d`
- :class:`CovariancePair`, operators :math:`\\widehat{V}_1, \\widehat{V}_{12}` and the means they were centered on
- :func:`empirical_cov_pair`, :func:`population_cov_pair`
- :func:`criterion_xi`, :func:`leave_one_out_criteria`, :func:`nested_criteria`
"""

from collections import namedtuple

import numpy as np

from spavs.exceptions import DegenerateSample, SingularSubmatrix
from spavs.linalg_kernel import IndexSet, hs_norm, restricted_solve
from spavs.utils import is_finite, is_symmetric

CovariancePair = namedtuple('CovariancePair',
                            ('v1', 'v12', 'mean_x', 'mean_y', 'n_sites'))
CovariancePair.__doc__ = """Covariance :math:`V_1` (p x p) and cross-covariance :math:`V_{12}` (p x q) operators,
with the means ``mean_x``, ``mean_y`` they were centered on and the number of sites they average over
(``None`` for population operators)."""


class SpatialSample:
    """ Paired observations :math:`\\{(X_{\\mathbf{i}}, Y_{\\mathbf{i}})\\}_{\\mathbf{i}\\in\\{1, \\dots, n\\}^d}` stored in lexicographic site order.

    :param x:
        :math:`n^d \\times p` covariates, :math:`p \\geq 2`
    :type x:
        array_like

    :param y:
        :math:`n^d \\times q` responses (a 1D array is read as :math:`q=1`)
    :type y:
        array_like

    :param grid_side:
        :math:`n \\geq 1`
    :type grid_side:
        int

    :param grid_dim:
        :math:`d \\geq 1`
    :type grid_dim:
        int, default 2
    """

    def __init__(self, x, y, grid_side, grid_dim=2):

        self.grid_side = int(grid_side)
        self.grid_dim = int(grid_dim)
        if self.grid_side < 1 or self.grid_dim < 1:
            err_print = ['grid side and dimension must be >= 1',
                         'Given: n={}, d={}'.format(grid_side, grid_dim)]
            raise ValueError('\n'.join(err_print))

        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if y.ndim == 1:
            y = y[:, None]

        n_sites = self.grid_side**self.grid_dim
        if x.ndim != 2 or y.ndim != 2 or len(x) != n_sites or len(y) != n_sites:
            err_print = ['x and y must hold n^d = {} rows each'.format(n_sites),
                         'Given: x.shape={}, y.shape={}'.format(x.shape, y.shape)]
            raise ValueError('\n'.join(err_print))
        if x.shape[1] < 2:
            raise ValueError('at least p=2 covariates are required. Given: p={}'
                             .format(x.shape[1]))

        self.x = is_finite(x)
        self.y = is_finite(y)

    @property
    def n_sites(self):
        return len(self.x)

    @property
    def p(self):
        return self.x.shape[1]

    @property
    def q(self):
        return self.y.shape[1]

    @property
    def sites(self):
        """:math:`n^d\\times d` array of 1-based site coordinates, in lexicographic order"""
        return site_coordinates(self.grid_side, self.grid_dim)

    def __str__(self):
        str_info = ['Spatial sample on the grid {{1, ..., {}}}^{}'
                    .format(self.grid_side, self.grid_dim),
                    '- number of sites = {}'.format(self.n_sites),
                    '- p = {} covariates, q = {} responses'.format(self.p, self.q)]

        return '\n'.join(str_info)


def site_coordinates(n, d=2):
    """Lexicographically ordered 1-based coordinates of :math:`\\{1, \\dots, n\\}^d`, as an :math:`n^d\\times d` integer array"""
    grids = np.meshgrid(*(np.arange(1, n + 1),) * d, indexing='ij')
    return np.stack([g.ravel() for g in grids], axis=1)


def cov_pair_from_arrays(x, y):
    """ Plug-in operators from raw :math:`N\\times p` and :math:`N\\times q` arrays, divisor :math:`N`

    .. math::

        \\widehat{V}_1 = \\frac{1}{N} \\sum_{\\mathbf{i}} (X_{\\mathbf{i}} - \\overline{X})\\otimes(X_{\\mathbf{i}} - \\overline{X}),
        \\quad
        \\widehat{V}_{12} = \\frac{1}{N} \\sum_{\\mathbf{i}} (Y_{\\mathbf{i}} - \\overline{Y})\\otimes(X_{\\mathbf{i}} - \\overline{X})

    :raises DegenerateSample:
        if :math:`N < 2`
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y[:, None]

    N = len(x)
    if N < 2:
        raise DegenerateSample('at least 2 sites are needed. Given: {}'.format(N))

    mean_x, mean_y = x.mean(axis=0), y.mean(axis=0)
    xc, yc = x - mean_x, y - mean_y

    v1 = xc.T.dot(xc) / N
    v1 = 0.5 * (v1 + v1.T)  # exact symmetry despite roundoff
    # (y - y_bar) x (x - x_bar) maps R^q to R^p, matrix x_c y_c^T
    v12 = xc.T.dot(yc) / N

    return CovariancePair(v1=v1, v12=v12, mean_x=mean_x, mean_y=mean_y,
                          n_sites=N)


def empirical_cov_pair(sample):
    """ Plug-in estimators :math:`\\widehat{V}_1^{(\\mathbf{n})}`, :math:`\\widehat{V}_{12}^{(\\mathbf{n})}` of a :class:`SpatialSample`.
    The divisor is :math:`n^d` and both variables are centered on their site averages.

    :rtype:
        :class:`CovariancePair`

    .. seealso::

        - :func:`cov_pair_from_arrays`
    """
    return cov_pair_from_arrays(sample.x, sample.y)


def population_cov_pair(v1, B):
    """ Exact operators implied by :math:`Y = BX + \\varepsilon` with :math:`\\varepsilon` independent of :math:`X`, i.e., :math:`V_{12}=V_1 B^{\\top}`

    :param v1:
        :math:`p\\times p` symmetric positive definite covariance of :math:`X`
    :param B:
        :math:`q\\times p` coefficient matrix (a 1D array is read as :math:`q=1`)
    """
    v1 = is_symmetric(np.asarray(v1, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    p = v1.shape[0]

    return CovariancePair(v1=v1, v12=v1.dot(B.T),
                          mean_x=np.zeros(p), mean_y=np.zeros(B.shape[0]),
                          n_sites=None)


def relevant_set(B, tol=0.0):
    """ :math:`I_1 = \\{j ~;~ \\|b_{\\bullet j}\\| > tol\\}`, the columns of :math:`B` with nonzero norm

    :rtype:
        :class:`~spavs.linalg_kernel.IndexSet`
    """
    B = np.atleast_2d(np.asarray(B, dtype=float))
    norms = np.sqrt(np.sum(B**2, axis=0))

    return IndexSet(np.flatnonzero(norms > tol) + 1, B.shape[1], allow_empty=True)


def criterion_xi(K, v1, v12):
    """ Compute :math:`\\xi_K = \\| V_{12} - V_1\\Pi_K V_{12} \\|_{\\mathcal{H}}`.
    Works identically for population and plug-in operators.

    :param K:
        Candidate set of variables to keep
    :type K:
        :class:`~spavs.linalg_kernel.IndexSet`

    :param v1:
        :math:`p\\times p` symmetric matrix with invertible :math:`K\\times K` block
    :param v12:
        :math:`p\\times q` matrix

    :return:
        :math:`\\xi_K\\geq 0`
    :rtype:
        float

    :raises SingularSubmatrix:
        see :func:`~spavs.linalg_kernel.restricted_projector`
    """
    v1 = is_symmetric(is_finite(np.asarray(v1, dtype=float)))
    v12 = is_finite(np.asarray(v12, dtype=float))
    if v12.ndim == 1:
        v12 = v12[:, None]

    if v12.shape[0] != v1.shape[0]:
        raise ValueError('v1 is {0}x{0} but v12 has {1} rows'
                         .format(v1.shape[0], v12.shape[0]))

    # V1 A_K^T (A_K V1 A_K^T)^-1 A_K V12 without forming Pi_K
    idx = K.zero_based
    fitted = v1[:, idx].dot(restricted_solve(K, v1, v12))

    return hs_norm(v12 - fitted)


def leave_one_out_criteria(cov):
    """ Leave-one-out criteria :math:`(\\xi_{K_1}, \\dots, \\xi_{K_p})` with :math:`K_i = I\\setminus\\{i\\}`.
    Variable :math:`i` is relevant if and only if :math:`\\xi_{K_i} > 0`.

    :param cov:
        Operators :math:`(V_1, V_{12})`, plug-in or population
    :type cov:
        :class:`CovariancePair`

    :return:
        Array of size :math:`p`, entry :math:`i-1` holds :math:`\\xi_{K_i}`
    :rtype:
        array_like

    :raises SingularSubmatrix:
        with the offending 1-based index in its ``index`` attribute
    """
    p = cov.v1.shape[0]
    if p < 2:
        raise ValueError('leave-one-out criteria need p >= 2. Given: {}'.format(p))

    full = IndexSet.full(p)
    xi = np.zeros(p)
    for i in range(1, p + 1):
        try:
            xi[i - 1] = criterion_xi(full.without(i), cov.v1, cov.v12)
        except SingularSubmatrix as e:
            raise SingularSubmatrix('K_{} = I - {{{}}}: {}'.format(i, i, e),
                                    index=i)

    return xi


def nested_criteria(tau, v1, v12):
    """ Criteria :math:`(\\xi_{J_1}, \\dots, \\xi_{J_p})` along the nested sets :math:`J_i = \\{\\tau(1), \\dots, \\tau(i)\\}`

    :param tau:
        Permutation of :math:`\\{1, \\dots, p\\}`, 1-based
    :type tau:
        array_like

    :raises SingularSubmatrix:
        with the position :math:`i` of the failing nested set in its ``index`` attribute
    """
    p = len(tau)
    xi = np.zeros(p)
    for i in range(1, p + 1):
        J_i = IndexSet(tau[:i], p)
        try:
            xi[i - 1] = criterion_xi(J_i, v1, v12)
        except SingularSubmatrix as e:
            raise SingularSubmatrix('J_{} = {}: {}'.format(i, J_i, e), index=i)

    return xi
