# coding: utf8
""" Monte Carlo comparison of the criterion-based selection ``OM`` with the penalized least squares comparators ``SCAD``, ``Hard``, ``LASSO``.

For each cell :math:`(n, \\kappa^2, a)` of the experiment and each replication, a training and an independent test dataset are simulated.
Every method selects covariates on the training data, an ordinary least squares fit restricted to the selection predicts the test responses, and the run records

- the test mean squared prediction error (MSE),
- whether the selected set equals the relevant set (PE, proportion of equality),
- the number of selected covariates (NV).

- :class:`ExperimentConfig`, read from an INI file with :py:meth:`ExperimentConfig.from_file`
- :func:`run_replications`, :func:`compute_metrics`, :func:`emit_report`
"""

import configparser
import logging
from collections import namedtuple
from itertools import product

import numpy as np
import scipy.linalg as la
import pandas as pd
from joblib import Parallel, delayed

from spavs.baselines import baseline_select
from spavs.estimation import relevant_set
from spavs.exceptions import ConfigError, EmptyCell
from spavs.linalg_kernel import IndexSet
from spavs.selection import PenaltyConfig, select_variables
from spavs.simulator import DEFAULT_B, SimulationConfig, generate_dataset
from spavs.tuning import (TuningGrid,
                          fit_restricted_ols,
                          optimize_tuning,
                          predict_restricted_ols)
from spavs.utils import (get_progress_bar,
                         replication_seed_sequence,
                         resolve_n_jobs,
                         stream_seed)

logger = logging.getLogger(__name__)

METHODS = ('OM', 'SCAD', 'Hard', 'LASSO')

RAW_COLUMNS = ('method', 'n', 'a', 'kappa2', 'rep', 'seed', 'mse',
               'nv_count', 'exact_match', 'selected_set', 'failed')
METRICS_COLUMNS = ('method', 'n', 'a', 'kappa2', 'replications', 'failed',
                   'mse', 'pe', 'nv')

# allowed keys of each section of the INI configuration
CONFIG_SCHEMA = {
    'experiment': ('replications', 'master_seed', 'output_path', 'methods', 'n_jobs'),
    'grid': ('n', 'a', 'kappa2'),
    'model': ('coefficients',),
    'tuning': ('mode', 'gamma', 'beta', 'gamma_values', 'beta_values', 'folds',
               'dim_penalty_arg'),
}


def _canonical_method(name):
    for m in METHODS:
        if m.lower() == str(name).strip().lower():
            return m
    err_print = ['Unknown method, choose among:',
                 ', '.join(METHODS),
                 'Given: {}'.format(name)]
    raise ConfigError('\n'.join(err_print))


class ExperimentConfig:
    """ Monte Carlo experiment over the cells :math:`n\\times\\kappa^2\\times a`

    :param master_seed:
        Seed every replication stream derives from, mandatory
    :type master_seed:
        int

    :param replications:
        Number of replications per cell
    :type replications:
        int, default 500

    :param n_list, a_list, kappa2_list:
        Grid sides, dependence ranges (``np.inf`` allowed) and error variances
    :type n_list, a_list, kappa2_list:
        list

    :param methods:
        Subset of ``OM, SCAD, Hard, LASSO``
    :type methods:
        list, default all of them

    :param B:
        Coefficient matrix, defines the relevant set
    :type B:
        array_like, default :math:`(3,5,4,6,0,0)`

    :param tuning:
        If given, :math:`(\\gamma, \\beta)` of ``OM`` are cross-validated on each training set,
        otherwise the fixed ``gamma, beta`` are used
    :type tuning:
        :class:`~spavs.tuning.TuningGrid`, default None

    :param gamma, beta:
        Fixed exponents
    :type gamma, beta:
        float, default 0.25

    :param dim_penalty_arg:
        See :class:`~spavs.selection.PenaltyConfig`

    :param output_path:
        Raw results CSV written by the command line interface
    :type output_path:
        string, default ``'results.csv'``

    :param n_jobs:
        Worker threads, see :func:`~spavs.utils.resolve_n_jobs`
    :type n_jobs:
        int, default None
    """

    def __init__(self, master_seed, replications=500, n_list=(12,), a_list=(25.0,),
                 kappa2_list=(1.0,), methods=METHODS, B=DEFAULT_B, tuning=None,
                 gamma=0.25, beta=0.25, dim_penalty_arg='position',
                 output_path='results.csv', n_jobs=None):

        if master_seed is None:
            raise ConfigError('master_seed is mandatory')
        self.master_seed = int(master_seed)
        if self.master_seed < 0:
            raise ConfigError('master_seed must be >= 0. Given: {}'.format(master_seed))

        self.replications = int(replications)
        if self.replications < 1:
            raise ConfigError('replications must be >= 1. Given: {}'.format(replications))

        self.n_list = [int(n) for n in n_list]
        self.a_list = [float(a) for a in a_list]
        self.kappa2_list = [float(k) for k in kappa2_list]
        for name, values in (('n', self.n_list), ('a', self.a_list),
                             ('kappa2', self.kappa2_list)):
            if not values:
                raise ConfigError('empty list of {} values'.format(name))

        self.methods = [_canonical_method(m) for m in methods]
        if not self.methods:
            raise ConfigError('empty list of methods')
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError('duplicated methods. Given: {}'.format(self.methods))

        try:
            self.B = np.atleast_2d(np.asarray(B, dtype=float))
            self.penalty = PenaltyConfig(gamma=gamma, beta=beta,
                                         dim_penalty_arg=dim_penalty_arg,
                                         p=self.B.shape[1])
            # validate every cell once
            for n, kappa2, a in self.cells():
                self.simulation_config(n, kappa2, a)
        except ConfigError:
            raise
        except ValueError as e:
            raise ConfigError(str(e))

        if self.B.shape[0] != 1 and set(self.methods) - {'OM'}:
            raise ConfigError('SCAD, Hard and LASSO need a single response row in B.'
                              ' Given: B.shape={}'.format(self.B.shape))

        self.tuning = tuning
        self.output_path = output_path
        self.n_jobs = n_jobs

    @classmethod
    def from_file(cls, path):
        """ Read an INI file with sections ``[experiment]``, ``[grid]``, ``[model]``, ``[tuning]``.
        Lists are comma separated, the rows of ``coefficients`` are separated by ``;``.
        Unknown sections or keys raise :class:`~spavs.exceptions.ConfigError`.

        .. code-block:: ini

            [experiment]
            replications = 100
            master_seed = 2024
            methods = OM, LASSO

            [grid]
            n = 12, 24
            a = 5, 25, inf
            kappa2 = 1, 9

            [model]
            coefficients = 3, 5, 4, 6, 0, 0

            [tuning]
            mode = fixed
            gamma = 0.25
            beta = 0.25
        """
        parser = configparser.ConfigParser()
        try:
            with open(path) as f:
                parser.read_file(f)
        except (OSError, configparser.Error) as e:
            raise ConfigError('cannot read configuration {}: {}'.format(path, e))

        for section in parser.sections():
            if section not in CONFIG_SCHEMA:
                raise ConfigError('unknown section [{}] in {}, choose among {}'
                                  .format(section, path, list(CONFIG_SCHEMA)))
            unknown = set(parser[section]) - set(CONFIG_SCHEMA[section])
            if unknown:
                raise ConfigError('unknown keys {} in section [{}] of {}'
                                  .format(sorted(unknown), section, path))

        def get(section, key, fallback=None):
            if parser.has_section(section) and key in parser[section]:
                return parser[section][key]
            return fallback

        def as_list(value, convert):
            try:
                return [convert(v) for v in value.split(',') if v.strip()]
            except ValueError as e:
                raise ConfigError('invalid list {!r} in {}: {}'.format(value, path, e))

        def as_int(value, key):
            try:
                return int(value)
            except ValueError:
                raise ConfigError('{} must be an integer. Given: {!r}'.format(key, value))

        params = {}
        seed = get('experiment', 'master_seed')
        if seed is None:
            raise ConfigError('[experiment] master_seed is mandatory in {}'.format(path))
        params['master_seed'] = as_int(seed, 'master_seed')

        if get('experiment', 'replications') is not None:
            params['replications'] = as_int(get('experiment', 'replications'),
                                            'replications')
        if get('experiment', 'output_path') is not None:
            params['output_path'] = get('experiment', 'output_path').strip()
        if get('experiment', 'methods') is not None:
            params['methods'] = as_list(get('experiment', 'methods'), str.strip)
        if get('experiment', 'n_jobs') is not None:
            params['n_jobs'] = as_int(get('experiment', 'n_jobs'), 'n_jobs')

        for key, name, convert in (('n', 'n_list', int),
                                   ('a', 'a_list', float),
                                   ('kappa2', 'kappa2_list', float)):
            if get('grid', key) is not None:
                params[name] = as_list(get('grid', key), convert)

        if get('model', 'coefficients') is not None:
            params['B'] = [as_list(row, float)
                           for row in get('model', 'coefficients').split(';')]

        mode = get('tuning', 'mode', 'fixed').strip().lower()
        if mode not in ('fixed', 'cv'):
            raise ConfigError('[tuning] mode must be fixed or cv. Given: {}'.format(mode))
        for key in ('gamma', 'beta'):
            if get('tuning', key) is not None:
                params[key] = as_list(get('tuning', key), float)[0]
        if get('tuning', 'dim_penalty_arg') is not None:
            params['dim_penalty_arg'] = get('tuning', 'dim_penalty_arg').strip()

        if mode == 'cv':
            grid_params = {}
            for key in ('gamma_values', 'beta_values'):
                if get('tuning', key) is not None:
                    grid_params[key] = as_list(get('tuning', key), float)
            folds = get('tuning', 'folds')
            if folds is not None:
                folds = folds.strip().lower()
                grid_params['folds'] = folds if folds in ('loo', 'auto') else as_int(folds, 'folds')
                if grid_params['folds'] == 'auto':
                    grid_params['folds'] = None
            try:
                params['tuning'] = TuningGrid(**grid_params)
            except ValueError as e:
                raise ConfigError(str(e))

        return cls(**params)

    def cells(self):
        """Parameter cells :math:`(n, \\kappa^2, a)` in configuration order, :math:`a` varying fastest"""
        return list(product(self.n_list, self.kappa2_list, self.a_list))

    def simulation_config(self, n, kappa2, a):
        return SimulationConfig(n=n, a=a, kappa2=kappa2, B=self.B)

    @property
    def true_set(self):
        return relevant_set(self.B)

    def __str__(self):
        str_info = ['Monte Carlo experiment, master seed {}'.format(self.master_seed),
                    '- {} replications on {} cells'.format(self.replications,
                                                           len(self.cells())),
                    '- n in {}, kappa2 in {}, a in {}'.format(self.n_list,
                                                              self.kappa2_list,
                                                              self.a_list),
                    '- methods {}'.format(', '.join(self.methods)),
                    '- relevant set {}'.format(self.true_set),
                    '- tuning: {}'.format('cross-validation' if self.tuning
                                          else 'fixed gamma={}, beta={}'
                                          .format(self.penalty.gamma,
                                                  self.penalty.beta))]

        return '\n'.join(str_info)


MetricsRow = namedtuple('MetricsRow', METRICS_COLUMNS)
MetricsRow.__doc__ = """Summary of one method on one cell: test MSE and NV averaged over the replications that did not fail, PE over all replications."""


def format_selected_set(selected):
    return '|'.join(str(k) for k in selected)


def parse_selected_set(value, p):
    if not isinstance(value, str) or not value.strip():
        return IndexSet([], p, allow_empty=True)
    return IndexSet([int(k) for k in value.split('|')], p, allow_empty=True)


def _select(method, train, cfg):

    if method != 'OM':
        return baseline_select(train, method.lower())

    pen = cfg.penalty
    if cfg.tuning is not None:
        tuned = optimize_tuning(train, cfg.tuning, pen=pen, n_jobs=1)
        pen = pen.with_exponents(tuned.gamma_opt, tuned.beta_opt)

    return select_variables(train, pen).i1_hat


def _replication(cfg, cell_index, cell, rep):
    """Rows of every method for replication ``rep`` of cell ``cell_index``"""
    n, kappa2, a = cell
    seed = stream_seed(cfg.master_seed, cell_index, rep)
    base = {'n': n, 'a': a, 'kappa2': kappa2, 'rep': rep, 'seed': seed}
    true_set = cfg.true_set

    train_ss, test_ss = replication_seed_sequence(cfg.master_seed,
                                                  cell_index, rep).spawn(2)
    sim = cfg.simulation_config(n, kappa2, a)
    try:
        train = generate_dataset(sim, np.random.default_rng(train_ss))
        test = generate_dataset(sim, np.random.default_rng(test_ss))
    except (ValueError, la.LinAlgError) as e:
        logger.warning('cell %s rep %d: simulation failed: %s', cell, rep, e)
        train = test = None

    rows = []
    for method in cfg.methods:
        row = dict(base, method=method, mse=np.nan, nv_count=0, exact_match=0,
                   selected_set='', failed=1)
        if train is not None:
            try:
                selected = _select(method, train, cfg)
                fit = fit_restricted_ols(train.x, train.y, selected)
                residuals = test.y - predict_restricted_ols(fit, test.x)
                row.update(mse=float(np.sum(residuals**2) / test.n_sites),
                           nv_count=len(selected),
                           exact_match=int(selected == true_set),
                           selected_set=format_selected_set(selected),
                           failed=0)
            except (ValueError, la.LinAlgError) as e:
                logger.warning('cell %s rep %d: %s failed: %s', cell, rep, method, e)
        rows.append(row)

    return cell_index, rep, rows


def run_replications(cfg, n_jobs=None, progress=False):
    """ Run every replication of every cell

    :param cfg:
        Experiment
    :type cfg:
        :class:`ExperimentConfig`

    :param n_jobs:
        Worker threads, overrides ``cfg.n_jobs``
    :type n_jobs:
        int, default None

    :param progress:
        Display a progress bar
    :type progress:
        bool, default False

    :return:
        Raw results, one row per (cell, replication, method) in this order, columns ``method,n,a,kappa2,rep,seed,mse,nv_count,exact_match,selected_set,failed``.
        Failed replications are flagged with ``failed=1`` and ``mse=nan``.
        The table only depends on ``cfg``, not on the number of threads.
    :rtype:
        pandas.DataFrame
    """
    n_jobs = resolve_n_jobs(n_jobs if n_jobs is not None else cfg.n_jobs)
    cells = cfg.cells()
    tasks = [(c, cell, r) for c, cell in enumerate(cells)
             for r in range(cfg.replications)]

    logger.info('running %d replications over %d cells with %d thread(s)',
                len(tasks), len(cells), n_jobs)

    results = {}
    pbar = get_progress_bar(total=len(tasks), disable=not progress)
    for c, r, rows in Parallel(n_jobs=n_jobs, prefer='threads', return_as='generator')(
            delayed(_replication)(cfg, c, cell, r) for c, cell, r in tasks):
        results[(c, r)] = rows
        pbar.update(1)
    pbar.close()

    method_rank = {m: k for k, m in enumerate(cfg.methods)}
    rows = [row for key in sorted(results)
            for row in sorted(results[key], key=lambda row: method_rank[row['method']])]
    raw = pd.DataFrame(rows, columns=list(RAW_COLUMNS))

    n_failed = int(raw['failed'].sum())
    if n_failed:
        logger.warning('%d of %d runs failed', n_failed, len(raw))

    return raw


def write_raw_results(raw, path):
    """Write the table of :func:`run_replications` as CSV, identical tables give identical bytes"""
    try:
        raw.loc[:, list(RAW_COLUMNS)].to_csv(path, index=False, na_rep='nan',
                                             float_format='%.17g')
    except OSError as e:
        raise OSError('cannot write raw results to {}: {}'.format(path, e))
    return path


def read_raw_results(path):
    """Read a CSV written by :func:`write_raw_results`"""
    raw = pd.read_csv(path, keep_default_na=False, na_values={'mse': ['nan']},
                      dtype={'method': str, 'selected_set': str})
    missing = set(RAW_COLUMNS) - set(raw.columns)
    if missing:
        raise ValueError('{} misses the columns {}'.format(path, sorted(missing)))

    for col in ('a', 'kappa2', 'mse'):
        raw[col] = raw[col].astype(float)

    return raw.loc[:, list(RAW_COLUMNS)]


def compute_metrics(raw, true_set=None):
    """ Summarize raw results per method and cell

    - PE, proportion of replications whose selected set equals the relevant set, failed ones counting as misses
    - NV, average number of selected covariates over the replications that did not fail
    - MSE, average test mean squared prediction error over the replications that did not fail

    :param raw:
        Output of :func:`run_replications` or :func:`read_raw_results`
    :type raw:
        pandas.DataFrame

    :param true_set:
        Relevant set. If given, exact matches are recomputed from the ``selected_set`` column, otherwise the ``exact_match`` column is used.
    :type true_set:
        :class:`~spavs.linalg_kernel.IndexSet`, default None

    :return:
        One row per (method, n, a, kappa2), in order of first appearance
    :rtype:
        list of :class:`MetricsRow`

    :raises EmptyCell:
        if ``raw`` holds no row
    """
    if raw is None or not len(raw):
        raise EmptyCell('no raw result to summarize')

    raw = raw.copy()
    raw['failed'] = raw['failed'].astype(int)
    if true_set is not None:
        raw['exact_match'] = [
            int(row.failed == 0
                and parse_selected_set(row.selected_set, true_set.ambient) == true_set)
            for row in raw.itertuples()]

    metrics = []
    for (method, n, a, kappa2), cell in raw.groupby(['method', 'n', 'a', 'kappa2'],
                                                   sort=False):
        ok = cell[cell['failed'] == 0]
        R = len(cell)
        metrics.append(MetricsRow(
            method=str(method), n=int(n), a=float(a), kappa2=float(kappa2),
            replications=R, failed=R - len(ok),
            mse=float(ok['mse'].mean()) if len(ok) else np.nan,
            pe=float(cell['exact_match'][cell['failed'] == 0].sum()) / R,
            nv=float(ok['nv_count'].mean()) if len(ok) else np.nan))

    return metrics


def format_report(metrics):
    """ Text tables of MSE, PE and NV per method, one table per cell :math:`(n, \\kappa^2, a)`
    """
    if not metrics:
        raise EmptyCell('no metrics to report')

    df = pd.DataFrame(metrics, columns=list(METRICS_COLUMNS))

    blocks = []
    for (n, kappa2, a), cell in df.groupby(['n', 'kappa2', 'a'], sort=False):
        title = 'n = {} (n^2 = {}), kappa2 = {:g}, a = {:g}'.format(n, n**2, kappa2, a)
        table = cell.loc[:, ['method', 'mse', 'pe', 'nv', 'failed']]\
            .rename(columns={'method': 'Method', 'mse': 'MSE', 'pe': 'PE',
                             'nv': 'NV', 'failed': 'failed'})
        blocks.append('\n'.join([title, '-' * len(title),
                                 table.to_string(index=False, float_format='%.3f')]))

    return '\n\n'.join(blocks) + '\n'


def emit_report(metrics, csv_path=None, text_path=None):
    """ Write metrics as CSV (header ``method,n,a,kappa2,replications,failed,mse,pe,nv``) and/or as text tables

    :return:
        The text tables, see :func:`format_report`
    :rtype:
        string

    :raises EmptyCell:
        if ``metrics`` is empty
    """
    text = format_report(metrics)

    def write_csv(path):
        pd.DataFrame(metrics, columns=list(METRICS_COLUMNS))\
            .to_csv(path, index=False, na_rep='nan', float_format='%.17g')

    def write_text(path):
        with open(path, 'w') as f:
            f.write(text)

    for path, write in ((csv_path, write_csv), (text_path, write_text)):
        if path is None:
            continue
        try:
            write(path)
        except OSError as e:
            raise OSError('cannot write report to {}: {}'.format(path, e))
        logger.info('report written to %s', path)

    return text


def read_metrics(path):
    """Read a metrics CSV written by :func:`emit_report`"""
    df = pd.read_csv(path, keep_default_na=False,
                     na_values={'mse': ['nan'], 'nv': ['nan']},
                     dtype={'method': str})
    missing = set(METRICS_COLUMNS) - set(df.columns)
    if missing:
        raise ValueError('{} misses the columns {}'.format(path, sorted(missing)))

    return [MetricsRow(method=str(r.method), n=int(r.n), a=float(r.a),
                       kappa2=float(r.kappa2), replications=int(r.replications),
                       failed=int(r.failed), mse=float(r.mse), pe=float(r.pe),
                       nv=float(r.nv))
            for r in df.itertuples(index=False)]
