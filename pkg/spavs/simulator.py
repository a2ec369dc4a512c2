# coding: utf8
""" Simulation of spatial regression data :math:`Y_{(i,j)} = B X_{(i,j)} + \\varepsilon_{(i,j)}` on the grid :math:`\\{1, \\dots, n\\}^2`.

- covariates, spatially weighted cosine series

    .. math::

        X^{(k)}_{(i,j)} = D_{(i,j)} \\frac{1}{\\sqrt{500}}
            \\sum_{\\ell=1}^{1000} \\cos\\left(w(1,\\ell) i + w(2,\\ell) j + q(\\ell) t_k + r(\\ell)\\right),
        \\quad
        D_{(i,j)} = \\frac{1}{n^2}\\sum_{(m,l)} e^{-\\|(i,j)-(m,l)\\|_2 / a}

  with :math:`w, q \\sim \\mathcal{N}(0, 0.25)`, :math:`r\\sim\\mathcal{U}[-\\pi, \\pi]` and :math:`t_k = 1 + 1.5(k-1)`,
- errors, a centered Gaussian random field with covariance :math:`\\kappa^2 e^{-\\|\\mathbf{h}\\|_2^2/9}`.

.. seealso:

    `Documentation <docs/simulations/index.rst>`_
"""

import warnings
from functools import lru_cache

import numpy as np
import scipy.linalg as la
from scipy.spatial.distance import cdist
import pandas as pd
import matplotlib.pyplot as plt

from spavs.estimation import SpatialSample, site_coordinates
from spavs.exceptions import GridTooLarge
from spavs.utils import check_random_state, is_finite, is_geq_0

# largest number of sites n^2 whose error covariance is factorized densely
MAX_DENSE_SITES = 4096
# ranges a above this value are treated as a = infinity, i.e., D = 1
INFINITE_RANGE = 1e9

DEFAULT_B = (3.0, 5.0, 4.0, 6.0, 0.0, 0.0)


class SimulationConfig:
    """ Parameters of the spatial data generating process

    :param n:
        Grid side, :math:`n\\geq 2`
    :type n:
        int

    :param a:
        Dependence range :math:`a>0` of the spatial weight :math:`D`. ``np.inf`` (or any value :math:`\\geq 10^9`) gives :math:`D\\equiv 1`
    :type a:
        float, default 25

    :param kappa2:
        Error variance :math:`\\kappa^2\\geq 0`
    :type kappa2:
        float, default 1

    :param B:
        :math:`q\\times p` coefficient matrix, a 1D array is read as :math:`q=1`
    :type B:
        array_like, default :math:`(3,5,4,6,0,0)`

    :param seed:
        Master seed used by :func:`generate_dataset` when no ``random_state`` is given
    :type seed:
        int, default None

    :param n_terms:
        Length of the cosine series
    :type n_terms:
        int, default 1000

    :param series_scale:
        Normalization of the cosine series
    :type series_scale:
        float, default :math:`1/\\sqrt{500}`

    :param freq_sd2:
        Variance of the frequencies :math:`w(1,\\ell), w(2,\\ell)` and of :math:`q(\\ell)`
    :type freq_sd2:
        float, default 0.25

    :param t_offsets:
        Strictly increasing :math:`(t_1, \\dots, t_p)`
    :type t_offsets:
        array_like, default :math:`t_k = 1 + 1.5(k-1)`
    """

    def __init__(self, n, a=25.0, kappa2=1.0, B=DEFAULT_B, seed=None,
                 n_terms=1000, series_scale=1.0 / np.sqrt(500), freq_sd2=0.25,
                 t_offsets=None):

        self.n = int(n)
        if self.n < 2:
            raise ValueError('grid side must be >= 2. Given: n={}'.format(n))

        self.a = float(a)
        if not self.a > 0:
            raise ValueError('dependence range must be > 0. Given: a={}'.format(a))

        self.kappa2 = float(kappa2)
        if not self.kappa2 >= 0:
            raise ValueError('error variance must be >= 0. Given: kappa2={}'
                             .format(kappa2))

        self.B = is_finite(np.atleast_2d(np.asarray(B, dtype=float)))
        if self.B.ndim != 2 or self.B.shape[1] < 2:
            err_print = ['B must be a q x p matrix with p >= 2',
                         'Given: B.shape={}'.format(self.B.shape)]
            raise ValueError('\n'.join(err_print))

        self.seed = seed
        self.n_terms = int(n_terms)
        self.series_scale = float(series_scale)
        self.freq_sd2 = float(is_geq_0(freq_sd2))

        if t_offsets is None:
            t_offsets = 1.0 + 1.5 * np.arange(self.p)
        self.t_offsets = np.asarray(t_offsets, dtype=float)
        if len(self.t_offsets) != self.p or np.any(np.diff(self.t_offsets) <= 0):
            err_print = ['t_offsets must hold p={} strictly increasing values'.format(self.p),
                         'Given: {}'.format(self.t_offsets)]
            raise ValueError('\n'.join(err_print))

    @property
    def p(self):
        return self.B.shape[1]

    @property
    def q(self):
        return self.B.shape[0]

    @property
    def n_sites(self):
        return self.n**2

    @property
    def spatially_homogeneous(self):
        return np.isinf(self.a) or self.a >= INFINITE_RANGE

    def replace(self, **changes):
        """Copy of the configuration with some parameters changed, e.g. ``cfg.replace(n=24, a=np.inf)``"""
        params = dict(n=self.n, a=self.a, kappa2=self.kappa2, B=self.B,
                      seed=self.seed, n_terms=self.n_terms,
                      series_scale=self.series_scale, freq_sd2=self.freq_sd2,
                      t_offsets=self.t_offsets)
        if 'B' in changes and 't_offsets' not in changes:
            params['t_offsets'] = None
        params.update(changes)
        return SimulationConfig(**params)

    def __str__(self):
        str_info = ['Spatial regression simulation on a {0}x{0} grid'.format(self.n),
                    '- dependence range a = {}'.format(self.a),
                    '- error variance kappa2 = {}'.format(self.kappa2),
                    '- B ({}x{}) = {}'.format(self.q, self.p, self.B.tolist()),
                    '- seed = {}'.format(self.seed)]

        return '\n'.join(str_info)


def spatial_weight(i, j, n, a):
    """ Spatial weight :math:`D_{(i,j)} = n^{-2}\\sum_{(m,l)\\in\\{1, \\dots, n\\}^2} \\exp\\left(-\\sqrt{(i-m)^2+(j-l)^2}/a\\right)` of site :math:`(i,j)`

    :param i, j:
        1-based site coordinates in :math:`\\{1, \\dots, n\\}`
    :param n:
        Grid side
    :param a:
        Range :math:`a>0`, ``np.inf`` gives 1

    :return:
        :math:`D_{(i,j)}\\in(0, 1]`
    :rtype:
        float
    """
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError('site ({}, {}) outside the {}x{} grid'.format(i, j, n, n))
    if not a > 0:
        raise ValueError('dependence range must be > 0. Given: a={}'.format(a))
    if np.isinf(a) or a >= INFINITE_RANGE:
        return 1.0

    dist = cdist([[i, j]], site_coordinates(n, 2))

    return float(np.mean(np.exp(-dist / a)))


def spatial_weight_grid(n, a):
    """ Spatial weights of every site, as an :math:`n\\times n` array with entry :math:`[i-1, j-1] = D_{(i,j)}`

    .. seealso::

        - :func:`spatial_weight`
    """
    if not a > 0:
        raise ValueError('dependence range must be > 0. Given: a={}'.format(a))
    if np.isinf(a) or a >= INFINITE_RANGE:
        return np.ones((n, n))

    sites = site_coordinates(n, 2)
    D = np.exp(-cdist(sites, sites) / a).mean(axis=1)

    return D.reshape(n, n)


def generate_covariates(cfg, random_state=None):
    """ Draw the :math:`n^2\\times p` covariate fields, sites in lexicographic order.
    One draw of :math:`(w, q, r)` is shared by every site and coordinate.

    :param cfg:
        Simulation parameters
    :type cfg:
        :class:`SimulationConfig`

    :param random_state:
        Random stream
    """
    rng = check_random_state(random_state)

    sd = np.sqrt(cfg.freq_sd2)
    w = rng.normal(scale=sd, size=(2, cfg.n_terms))
    q = rng.normal(scale=sd, size=cfg.n_terms)
    r = rng.uniform(-np.pi, np.pi, size=cfg.n_terms)

    sites = site_coordinates(cfg.n, 2)
    base = sites.dot(w) + r  # n^2 x n_terms

    x = np.empty((cfg.n_sites, cfg.p))
    for k, t_k in enumerate(cfg.t_offsets):
        x[:, k] = np.cos(base + q * t_k).sum(axis=1)

    D = spatial_weight_grid(cfg.n, cfg.a).ravel()

    return cfg.series_scale * D[:, None] * x


@lru_cache(maxsize=16)
def _unit_error_factor(n):
    """Lower Cholesky factor of :math:`[e^{-\\|s-t\\|^2/9}]_{s,t}`, read only"""

    sites = site_coordinates(n, 2)
    C = np.exp(-cdist(sites, sites, 'sqeuclidean') / 9.0)

    jitter = 0.0
    while True:
        try:
            L = la.cholesky(C + jitter * np.eye(len(C)), lower=True,
                            check_finite=False)
            break
        except la.LinAlgError:
            if jitter >= 1e-4:
                raise
            jitter = 1e-10 if jitter == 0 else 10 * jitter
            if jitter > 1e-10:
                warnings.warn('error covariance of the {0}x{0} grid not numerically'
                              ' positive definite, diagonal jitter raised to {1:.0e} kappa2'
                              .format(n, jitter))

    L.setflags(write=False)
    return L


def generate_errors(cfg, random_state=None, n_fields=None):
    """ Draw a centered Gaussian random field with :math:`\\operatorname{Cov}(\\varepsilon_s, \\varepsilon_t) = \\kappa^2 e^{-\\|s-t\\|_2^2/9}` by a dense Cholesky factorization.
    A diagonal jitter :math:`10^{-10}\\kappa^2` is added when the factorization fails, and raised tenfold while it keeps failing.

    :param n_fields:
        Number of independent fields. ``None`` returns a single field as an array of size :math:`n^2`,
        an integer returns an :math:`n^2\\times` ``n_fields`` array.
    :type n_fields:
        int, default None

    :raises GridTooLarge:
        if :math:`n^2 >` :py:data:`MAX_DENSE_SITES`
    """
    if cfg.n_sites > MAX_DENSE_SITES:
        err_print = ['dense error covariance limited to {} sites'.format(MAX_DENSE_SITES),
                     'Given: n={}, n^2={}'.format(cfg.n, cfg.n_sites)]
        raise GridTooLarge('\n'.join(err_print))

    rng = check_random_state(random_state)
    size = (cfg.n_sites, 1 if n_fields is None else int(n_fields))

    if cfg.kappa2 == 0:
        eps = np.zeros(size)
    else:
        L = _unit_error_factor(cfg.n)
        eps = np.sqrt(cfg.kappa2) * L.dot(rng.standard_normal(size))

    return eps[:, 0] if n_fields is None else eps


def generate_dataset(cfg, random_state=None, return_errors=False):
    """ Draw a spatial sample :math:`Y = BX + \\varepsilon` sitewise, with one independent error field per response coordinate.

    :param cfg:
        Simulation parameters
    :type cfg:
        :class:`SimulationConfig`

    :param random_state:
        Random stream, defaults to ``cfg.seed``. The same seed and configuration give identical samples.

    :param return_errors:
        Also return the :math:`n^2\\times q` errors
    :type return_errors:
        bool, default False

    :rtype:
        :class:`~spavs.estimation.SpatialSample` (, array_like)
    """
    rng = check_random_state(cfg.seed if random_state is None else random_state)

    x = generate_covariates(cfg, rng)
    eps = generate_errors(cfg, rng, n_fields=cfg.q)
    y = x.dot(cfg.B.T) + eps

    sample = SpatialSample(x, y, grid_side=cfg.n, grid_dim=2)

    return (sample, eps) if return_errors else sample


def covariate_population_cov(cfg):
    """ Ensemble covariance of the covariates, averaged over sites

    .. math::

        (V_1)_{k\\ell} = \\overline{D^2}\\, \\frac{n_{terms}\\, s^2}{2}\\, e^{-\\sigma^2 (t_k - t_\\ell)^2/2},

    where :math:`s` is ``series_scale``, :math:`\\sigma^2` is ``freq_sd2`` and :math:`\\overline{D^2}` the mean squared spatial weight (1 when :math:`a=\\infty`).
    """
    dt = cfg.t_offsets[:, None] - cfg.t_offsets[None, :]
    D2 = np.mean(spatial_weight_grid(cfg.n, cfg.a)**2)

    return D2 * 0.5 * cfg.n_terms * cfg.series_scale**2\
        * np.exp(-0.5 * cfg.freq_sd2 * dt**2)


def write_dataset_csv(sample, path):
    """ Write a 2D spatial sample with header ``site_i,site_j,x1..xp,y1..yq``, one row per site in lexicographic order
    """
    if sample.grid_dim != 2:
        raise ValueError('CSV export handles 2D grids only. Given: d={}'
                         .format(sample.grid_dim))

    sites = sample.sites
    df = pd.DataFrame({'site_i': sites[:, 0], 'site_j': sites[:, 1]})
    for k in range(sample.p):
        df['x{}'.format(k + 1)] = sample.x[:, k]
    for k in range(sample.q):
        df['y{}'.format(k + 1)] = sample.y[:, k]

    df.to_csv(path, index=False, float_format='%.17g')

    return path


def read_dataset_csv(path):
    """ Read a CSV written by :func:`write_dataset_csv`. Rows may come in any order, they are sorted back to lexicographic site order.

    :rtype:
        :class:`~spavs.estimation.SpatialSample`
    """
    df = pd.read_csv(path)

    x_cols = [c for c in df.columns if c.startswith('x')]
    y_cols = [c for c in df.columns if c.startswith('y')]
    missing = {'site_i', 'site_j'} - set(df.columns)
    if missing or not x_cols or not y_cols:
        err_print = ['dataset CSV needs columns site_i, site_j, x1..xp, y1..yq',
                     'Given: {} in {}'.format(list(df.columns), path)]
        raise ValueError('\n'.join(err_print))

    x_cols = sorted(x_cols, key=lambda c: int(c[1:]))
    y_cols = sorted(y_cols, key=lambda c: int(c[1:]))

    n = int(round(np.sqrt(len(df))))
    df = df.sort_values(['site_i', 'site_j'], kind='mergesort')
    if not np.array_equal(df[['site_i', 'site_j']].to_numpy(), site_coordinates(n, 2)):
        raise ValueError('sites of {} do not cover a square grid exactly once'
                         .format(path))

    return SpatialSample(df[x_cols].to_numpy(), df[y_cols].to_numpy(),
                         grid_side=n, grid_dim=2)


def plot_field(sample, column='x1', ax=None):
    """ Display one coordinate of a 2D spatial sample as an image of the grid

    :param column:
        ``'xk'`` or ``'yk'``, 1-based
    :type column:
        string, default ``'x1'``
    """
    if sample.grid_dim != 2:
        raise ValueError('only 2D fields can be displayed')

    values = {'x': sample.x, 'y': sample.y}.get(column[:1])
    k = int(column[1:]) - 1
    if values is None or not 0 <= k < values.shape[1]:
        raise ValueError('unknown column {}, choose among x1..x{}, y1..y{}'
                         .format(column, sample.p, sample.q))

    if ax is None:
        fig, ax = plt.subplots(figsize=(5, 4))

    n = sample.grid_side
    im = ax.imshow(values[:, k].reshape(n, n), origin='lower',
                   extent=(0.5, n + 0.5, 0.5, n + 0.5), cmap='viridis')
    plt.colorbar(im, ax=ax)
    ax.set_xlabel('j')
    ax.set_ylabel('i')
    ax.set_title('Field {} on the {}x{} grid'.format(column, n, n))

    return ax
