# coding: utf8
""" Command line interface ``spavs``

- ``spavs simulate``: write one simulated dataset as CSV
- ``spavs select``: select covariates of a dataset CSV, the result is printed as JSON
- ``spavs tune``: cross-validation table of a dataset CSV
- ``spavs experiment``: Monte Carlo experiment described by an INI file
- ``spavs report``: metrics and text tables from raw experiment results
"""

import argparse
import json
import logging
import sys

from spavs.exceptions import SingularSubmatrix
from spavs.harness import (ExperimentConfig,
                           compute_metrics,
                           emit_report,
                           read_raw_results,
                           run_replications,
                           write_raw_results)
from spavs.selection import PenaltyConfig, select_variables
from spavs.simulator import (DEFAULT_B,
                             SimulationConfig,
                             generate_dataset,
                             read_dataset_csv,
                             write_dataset_csv)
from spavs.tuning import TuningGrid, optimize_tuning, write_cv_table

logger = logging.getLogger('spavs')


def _float_list(value):
    return [float(v) for v in value.split(',') if v.strip()]


def _folds(value):
    if value in ('loo', 'auto'):
        return None if value == 'auto' else value
    return int(value)


def _add_penalty_arguments(parser):
    parser.add_argument('--gamma', type=float, default=0.25,
                        help='exponent of the permutation penalty, in ]0, 1/2[')
    parser.add_argument('--beta', type=float, default=0.25,
                        help='exponent of the dimension penalty, in ]0, 1/2[')
    parser.add_argument('--dim-penalty-arg', default='position',
                        choices=('position', 'permuted-index'),
                        help='argument of the dimension penalty g')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='spavs',
        description='Variable selection in spatial linear regression')
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='log debug messages')
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('simulate', help='write one simulated dataset as CSV')
    p.add_argument('--n', type=int, required=True, help='grid side')
    p.add_argument('--a', type=float, default=25.0,
                   help='dependence range, inf for spatially homogeneous weights')
    p.add_argument('--kappa2', type=float, default=1.0, help='error variance')
    p.add_argument('--coefficients', type=_float_list,
                   default=list(DEFAULT_B), help='comma separated coefficients')
    p.add_argument('--seed', type=int, required=True, help='random seed')
    p.add_argument('-o', '--output', required=True, help='dataset CSV')

    p = sub.add_parser('select', help='select the relevant covariates of a dataset')
    p.add_argument('dataset', help='dataset CSV')
    _add_penalty_arguments(p)
    p.add_argument('-o', '--output', help='JSON file, standard output by default')

    p = sub.add_parser('tune', help='cross-validate gamma and beta on a dataset')
    p.add_argument('dataset', help='dataset CSV')
    p.add_argument('--gamma-values', type=_float_list,
                   default=None, help='comma separated candidates of gamma')
    p.add_argument('--beta-values', type=_float_list,
                   default=None, help='comma separated candidates of beta')
    p.add_argument('--folds', type=_folds, default=None,
                   help='loo, auto or a number of folds')
    p.add_argument('--dim-penalty-arg', default='position',
                   choices=('position', 'permuted-index'))
    p.add_argument('--jobs', type=int, default=None, help='worker threads')
    p.add_argument('-o', '--output', required=True, help='cross-validation table CSV')

    p = sub.add_parser('experiment', help='run a Monte Carlo experiment')
    p.add_argument('config', help='INI configuration file')
    p.add_argument('--jobs', type=int, default=None, help='worker threads')
    p.add_argument('-o', '--output', default=None,
                   help='raw results CSV, overrides the configuration')
    p.add_argument('--metrics', default=None, help='metrics CSV')
    p.add_argument('--report', default=None, help='text tables')
    p.add_argument('--progress', action='store_true', help='display a progress bar')

    p = sub.add_parser('report', help='summarize raw experiment results')
    p.add_argument('raw', help='raw results CSV')
    p.add_argument('--metrics', default=None, help='metrics CSV')
    p.add_argument('--report', default=None, help='text tables, printed when omitted')

    return parser


def cmd_simulate(args):
    cfg = SimulationConfig(n=args.n, a=args.a, kappa2=args.kappa2,
                           B=args.coefficients, seed=args.seed)
    logger.debug('%s', cfg)
    write_dataset_csv(generate_dataset(cfg), args.output)
    logger.info('dataset written to %s', args.output)


def cmd_select(args):
    sample = read_dataset_csv(args.dataset)
    pen = PenaltyConfig(gamma=args.gamma, beta=args.beta,
                        dim_penalty_arg=args.dim_penalty_arg)
    res = select_variables(sample, pen)

    out = {'tau': [int(t) for t in res.tau],
           's_hat': res.s_hat,
           'selected': list(res.i1_hat),
           'xi_minus': res.xi_minus.tolist(),
           'phi': res.phi.tolist(),
           'nested_xi': res.nested_xi.tolist(),
           'psi': res.psi.tolist(),
           'gamma': pen.gamma, 'beta': pen.beta,
           'dim_penalty_arg': pen.dim_penalty_arg}
    text = json.dumps(out, indent=2)

    if args.output is None:
        print(text)
    else:
        with open(args.output, 'w') as f:
            f.write(text + '\n')
        logger.info('selection written to %s', args.output)


def cmd_tune(args):
    sample = read_dataset_csv(args.dataset)
    grid_params = {'folds': args.folds}
    if args.gamma_values is not None:
        grid_params['gamma_values'] = args.gamma_values
    if args.beta_values is not None:
        grid_params['beta_values'] = args.beta_values
    grid = TuningGrid(**grid_params)

    res = optimize_tuning(sample, grid,
                          pen=PenaltyConfig(dim_penalty_arg=args.dim_penalty_arg),
                          n_jobs=args.jobs)
    write_cv_table(res.cv_table, args.output)
    logger.info('gamma_opt = %s, beta_opt = %s, table written to %s',
                res.gamma_opt, res.beta_opt, args.output)


def cmd_experiment(args):
    cfg = ExperimentConfig.from_file(args.config)
    logger.info('%s', cfg)

    raw = run_replications(cfg, n_jobs=args.jobs, progress=args.progress)
    output = args.output or cfg.output_path
    write_raw_results(raw, output)
    logger.info('raw results written to %s', output)

    text = emit_report(compute_metrics(raw), csv_path=args.metrics,
                       text_path=args.report)
    if args.report is None:
        print(text)


def cmd_report(args):
    raw = read_raw_results(args.raw)
    text = emit_report(compute_metrics(raw), csv_path=args.metrics,
                       text_path=args.report)
    if args.report is None:
        print(text)


COMMANDS = {'simulate': cmd_simulate,
            'select': cmd_select,
            'tune': cmd_tune,
            'experiment': cmd_experiment,
            'report': cmd_report}


def main(argv=None):
    """Entry point of the ``spavs`` command, returns the exit status"""
    args = build_parser().parse_args(argv)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s %(name)s %(levelname)s %(message)s')

    try:
        COMMANDS[args.command](args)
    except SingularSubmatrix as e:
        logger.error('degenerate design: %s', e)
        return 2
    except (ValueError, OSError) as e:
        logger.error('%s', e)
        return 1

    return 0


if __name__ == '__main__':
    sys.exit(main())
