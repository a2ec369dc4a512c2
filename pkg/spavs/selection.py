# coding: utf8
""" Penalized estimation of the relevant set :math:`I_1 = \\{\\tau(1), \\dots, \\tau(s)\\}`:

- :func:`estimate_permutation`, sorts :math:`\\widehat{\\phi}_i = \\widehat{\\xi}_{K_i} + f(i)/n^{d\\gamma}` in decreasing order
- :func:`estimate_dimension`, minimizes :math:`\\widehat{\\psi}_i = \\widehat{\\xi}_{\\widehat{J}_i} + g(\\cdot)/n^{d\\beta}`
- :func:`select_variables`, the whole chain from a :class:`~spavs.estimation.SpatialSample`
- :func:`characterize_relevant_set`, the population characterization through exact criteria

The penalties :math:`f` (strictly decreasing) and :math:`g` (strictly increasing) break ties between criteria that vanish in the limit, they are gathered in :class:`PenaltyConfig`.
"""

from collections import namedtuple

import numpy as np
import matplotlib.pyplot as plt

from spavs.estimation import (empirical_cov_pair,
                              leave_one_out_criteria,
                              nested_criteria)
from spavs.linalg_kernel import IndexSet
from spavs.utils import is_finite, is_in_open_interval

DIM_PENALTY_ARGS = ('position', 'permuted-index')


def log_decreasing(x, shift=1.0):
    """:math:`f(x) = \\ln(x + shift)^{-0.1}`. With ``shift=0`` it is undefined at :math:`x=1`"""
    with np.errstate(divide='ignore'):
        return np.log(np.asarray(x, dtype=float) + shift)**(-0.1)


def log_increasing(x, shift=1.0):
    """:math:`g(x) = \\ln(x + shift)^{0.1}`. With ``shift=0`` it vanishes at :math:`x=1`"""
    return np.log(np.asarray(x, dtype=float) + shift)**0.1


def literal_log_decreasing(x):
    return log_decreasing(x, shift=0.0)


def literal_log_increasing(x):
    return log_increasing(x, shift=0.0)


class PenaltyConfig:
    """ Penalties of the permutation and dimension estimators

    :param gamma:
        Exponent :math:`0<\\gamma<1/2` of the permutation penalty :math:`f(i)/n^{d\\gamma}`
    :type gamma:
        float, default 0.25

    :param beta:
        Exponent :math:`0<\\beta<1/2` of the dimension penalty :math:`g(\\cdot)/n^{d\\beta}`
    :type beta:
        float, default 0.25

    :param f:
        Strictly decreasing positive function on :math:`\\{1, \\dots, p\\}`, vectorized
    :type f:
        callable, default :func:`log_decreasing`

    :param g:
        Strictly increasing positive function on :math:`\\{1, \\dots, p\\}`, vectorized
    :type g:
        callable, default :func:`log_increasing`

    :param dim_penalty_arg:
        - ``'position'`` (default): penalize :math:`\\widehat{J}_i` by :math:`g(i)`
        - ``'permuted-index'``: penalize by :math:`g(\\widehat{\\tau}(i))`
    :type dim_penalty_arg:
        string

    :param p:
        If given, monotonicity and positivity of ``f`` and ``g`` are checked on :math:`\\{1, \\dots, p\\}` right away.
        Otherwise they are checked at first use.
    :type p:
        int, default None

    .. caution::

        With ``'permuted-index'``, exact zero criteria do not guarantee :math:`\\widehat{s}=s`:
        for :math:`I_1=\\{5\\}` and :math:`\\widehat{\\tau}=(5,1,2,3,4)` the minimum is reached at :math:`i=2`.
    """

    def __init__(self, gamma=0.25, beta=0.25, f=log_decreasing, g=log_increasing,
                 dim_penalty_arg='position', p=None):

        self.gamma = is_in_open_interval(gamma, 0.0, 0.5, 'gamma')
        self.beta = is_in_open_interval(beta, 0.0, 0.5, 'beta')

        if not (callable(f) and callable(g)):
            raise ValueError('penalty functions f and g must be callable')
        self.f, self.g = f, g

        if dim_penalty_arg not in DIM_PENALTY_ARGS:
            err_print = ['Invalid `dim_penalty_arg`, choose among:',
                         '- `position`: g(i) (default)',
                         '- `permuted-index`: g(tau(i))',
                         'Given: {}'.format(dim_penalty_arg)]
            raise ValueError('\n'.join(err_print))
        self.dim_penalty_arg = dim_penalty_arg

        self._checked_up_to = 0
        if p is not None:
            self.check(p)

    def check(self, p):
        """ Check :math:`f(1) > \\dots > f(p) > 0` and :math:`0 < g(1) < \\dots < g(p)`
        """
        if p <= self._checked_up_to:
            return self

        i = np.arange(1, p + 1)
        with np.errstate(all='ignore'):
            f_i = np.asarray(self.f(i), dtype=float)
            g_i = np.asarray(self.g(i), dtype=float)

        if not (np.all(np.isfinite(f_i)) and np.all(f_i > 0)
                and np.all(np.diff(f_i) < 0)):
            err_print = ['f must be finite, positive and strictly decreasing on {{1, ..., {}}}'.format(p),
                         'Given: f(1..p) = {}'.format(f_i)]
            raise ValueError('\n'.join(err_print))
        if not (np.all(np.isfinite(g_i)) and np.all(g_i > 0)
                and np.all(np.diff(g_i) > 0)):
            err_print = ['g must be finite, positive and strictly increasing on {{1, ..., {}}}'.format(p),
                         'Given: g(1..p) = {}'.format(g_i)]
            raise ValueError('\n'.join(err_print))

        self._checked_up_to = p
        return self

    def with_exponents(self, gamma, beta):
        """Copy with the exponents replaced, the penalty functions and mode are kept"""
        return PenaltyConfig(gamma=gamma, beta=beta, f=self.f, g=self.g,
                             dim_penalty_arg=self.dim_penalty_arg)

    def __str__(self):
        str_info = ['Penalties of the permutation and dimension estimators',
                    '- gamma = {}, beta = {}'.format(self.gamma, self.beta),
                    '- f = {}, g = {}'.format(getattr(self.f, '__name__', self.f),
                                              getattr(self.g, '__name__', self.g)),
                    '- dimension penalty argument = {}'.format(self.dim_penalty_arg)]

        return '\n'.join(str_info)


SelectionResult = namedtuple('SelectionResult',
                             ('tau', 's_hat', 'i1_hat',
                              'xi_minus', 'phi', 'nested_xi', 'psi'))
SelectionResult.__doc__ = """Output of :func:`select_variables`:
permutation ``tau`` (1-based), dimension ``s_hat``, selected set ``i1_hat`` = {tau(1), ..., tau(s_hat)},
leave-one-out criteria ``xi_minus``, penalized values ``phi``, criteria ``nested_xi`` along the nested sets and their penalized values ``psi``."""


def penalized_permutation_values(xi_minus, pen, n, d):
    """:math:`\\widehat{\\phi}_i = \\widehat{\\xi}_{K_i} + f(i)/n^{d\\gamma}`, for :math:`i=1, \\dots, p`"""
    xi_minus = is_finite(np.asarray(xi_minus, dtype=float))
    p = len(xi_minus)
    pen.check(p)

    return xi_minus + pen.f(np.arange(1, p + 1)) / float(n)**(d * pen.gamma)


def estimate_permutation(xi_minus, pen, n, d=2):
    """ Estimate :math:`\\tau` by sorting :math:`\\widehat{\\phi}_i = \\widehat{\\xi}_{K_i} + f(i)/n^{d\\gamma}` in decreasing order.

    :param xi_minus:
        Leave-one-out criteria :math:`(\\widehat{\\xi}_{K_1}, \\dots, \\widehat{\\xi}_{K_p})`, :math:`p\\geq 2`
    :type xi_minus:
        array_like

    :param pen:
        Penalties
    :type pen:
        :class:`PenaltyConfig`

    :param n:
        Grid side
    :param d:
        Grid dimension

    :return:
        Permutation :math:`\\widehat{\\tau}` as a 1-based integer array. Exact float ties are broken by the smaller original index.
    :rtype:
        array_like
    """
    if len(xi_minus) < 2:
        raise ValueError('at least p=2 criteria are needed. Given: {}'
                         .format(len(xi_minus)))

    phi = penalized_permutation_values(xi_minus, pen, n, d)
    # lexsort: last key is primary
    order = np.lexsort((np.arange(len(phi)), -phi))

    return order + 1


def penalized_dimension_values(tau, nested_xi, pen, n, d):
    """:math:`\\widehat{\\psi}_i = \\widehat{\\xi}_{\\widehat{J}_i} + g(\\cdot)/n^{d\\beta}`, for :math:`i=1, \\dots, p`"""
    tau = np.asarray(tau, dtype=int)
    nested_xi = is_finite(np.asarray(nested_xi, dtype=float))
    p = len(nested_xi)

    if len(tau) != p or sorted(tau) != list(range(1, p + 1)):
        err_print = ['tau must be a permutation of {{1, ..., {}}}'.format(p),
                     'Given: {}'.format(tau)]
        raise ValueError('\n'.join(err_print))
    pen.check(p)

    if pen.dim_penalty_arg == 'position':
        arg = np.arange(1, p + 1)
    else:
        arg = tau

    return nested_xi + pen.g(arg) / float(n)**(d * pen.beta)


def estimate_dimension(tau, nested_xi, pen, n, d=2):
    """ Estimate :math:`s` as the smallest minimizer of :math:`\\widehat{\\psi}_i = \\widehat{\\xi}_{\\widehat{J}_i} + g(\\cdot)/n^{d\\beta}`

    :param tau:
        Permutation :math:`\\widehat{\\tau}`, 1-based
    :param nested_xi:
        Entry :math:`i-1` holds :math:`\\widehat{\\xi}` of :math:`\\widehat{J}_i = \\{\\widehat{\\tau}(1), \\dots, \\widehat{\\tau}(i)\\}`

    :return:
        :math:`\\widehat{s}\\in\\{1, \\dots, p\\}`. The value :math:`p` means no variable is discarded.
    :rtype:
        int

    .. seealso::

        - :class:`PenaltyConfig` for the argument of :math:`g`
    """
    psi = penalized_dimension_values(tau, nested_xi, pen, n, d)

    # np.argmin returns the first minimizer
    return int(np.argmin(psi)) + 1


def select_from_covariance(cov, pen, n, d=2):
    """ Chain :func:`~spavs.estimation.leave_one_out_criteria`, :func:`estimate_permutation`,
    :func:`~spavs.estimation.nested_criteria` and :func:`estimate_dimension` on given operators.

    :param cov:
        Plug-in or population operators
    :type cov:
        :class:`~spavs.estimation.CovariancePair`

    :param n:
        Grid side setting the penalty rates :math:`n^{-d\\gamma}, n^{-d\\beta}`

    :rtype:
        :class:`SelectionResult`
    """
    p = cov.v1.shape[0]

    xi_minus = leave_one_out_criteria(cov)
    phi = penalized_permutation_values(xi_minus, pen, n, d)
    tau = estimate_permutation(xi_minus, pen, n, d)

    nested_xi = nested_criteria(tau, cov.v1, cov.v12)
    psi = penalized_dimension_values(tau, nested_xi, pen, n, d)
    s_hat = estimate_dimension(tau, nested_xi, pen, n, d)

    return SelectionResult(tau=tau, s_hat=s_hat,
                           i1_hat=IndexSet(tau[:s_hat], p),
                           xi_minus=xi_minus, phi=phi,
                           nested_xi=nested_xi, psi=psi)


def select_variables(sample, pen=None):
    """ Estimate the relevant set :math:`\\widehat{I}_1 = \\{\\widehat{\\tau}(1), \\dots, \\widehat{\\tau}(\\widehat{s})\\}` from a spatial sample

    :param sample:
        Observations on the grid :math:`\\{1, \\dots, n\\}^d`
    :type sample:
        :class:`~spavs.estimation.SpatialSample`

    :param pen:
        Penalties, default :class:`PenaltyConfig` ``()``
    :type pen:
        :class:`PenaltyConfig`

    :rtype:
        :class:`SelectionResult`

    :raises SingularSubmatrix:
        when a block of :math:`\\widehat{V}_1` cannot be inverted
    """
    if pen is None:
        pen = PenaltyConfig()

    cov = empirical_cov_pair(sample)

    return select_from_covariance(cov, pen, sample.grid_side, sample.grid_dim)


def characterize_relevant_set(xi_minus, tol=1e-10):
    """ Population characterization of :math:`I_1` from exact leave-one-out criteria:
    :math:`\\tau` sorts the :math:`\\xi_{K_i}` decreasingly (ties by increasing index) and :math:`s` counts those above ``tol``.

    :return:
        ``(tau, s, I_1)``, :math:`s=0` and :math:`I_1=\\emptyset` when no criterion exceeds ``tol``
    :rtype:
        tuple
    """
    xi_minus = is_finite(np.asarray(xi_minus, dtype=float))
    p = len(xi_minus)

    xi = np.where(xi_minus > tol, xi_minus, 0.0)
    tau = np.lexsort((np.arange(p), -xi)) + 1
    s = int(np.sum(xi > 0))

    return tau, s, IndexSet(tau[:s], p, allow_empty=True)


def plot_selection(result, ax=None):
    """ Display the leave-one-out criteria, the penalized values :math:`\\widehat{\\phi}` and :math:`\\widehat{\\psi}`, and mark :math:`\\widehat{s}`

    :param result:
        Output of :func:`select_variables`
    :type result:
        :class:`SelectionResult`
    """
    if ax is None:
        fig, ax = plt.subplots(1, 2, figsize=(12, 4))

    p = len(result.tau)
    idx = np.arange(1, p + 1)

    ax[0].bar(idx - 0.2, result.xi_minus, width=0.4, label=r'$\widehat{\xi}_{K_i}$')
    ax[0].bar(idx + 0.2, result.phi, width=0.4, label=r'$\widehat{\phi}_i$')
    ax[0].set_xticks(idx)
    ax[0].set_xlabel('variable $i$')
    ax[0].set_title('Leave-one-out criteria')
    ax[0].legend()

    ax[1].plot(idx, result.nested_xi, 'o-', label=r'$\widehat{\xi}_{\widehat{J}_i}$')
    ax[1].plot(idx, result.psi, 's--', label=r'$\widehat{\psi}_i$')
    ax[1].axvline(result.s_hat, color='k', ls=':',
                  label=r'$\widehat{{s}}={}$'.format(result.s_hat))
    ax[1].set_xticks(idx)
    ax[1].set_xticklabels(result.tau)
    ax[1].set_xlabel(r'$\widehat{\tau}(i)$')
    ax[1].set_title(r'Selected set $\widehat{{I}}_1 = \{{{}\}}$'
                    .format(', '.join(map(str, result.i1_hat))))
    ax[1].legend()

    return ax
