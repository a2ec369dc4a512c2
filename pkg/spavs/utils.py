# coding: utf8
""" Helpers shared by the whole package:

- random number generation: :func:`check_random_state`, :func:`replication_rng`, :func:`stream_seed`
- cheap argument checks returning their input when valid: :func:`is_symmetric`, :func:`is_geq_0`, :func:`is_finite`, :func:`is_in_open_interval`
- :func:`get_progress_bar`, :func:`resolve_n_jobs`
"""

import os

import numpy as np

NUM_THREADS_ENV = 'SPAVS_NUM_THREADS'


def check_random_state(seed=None):
    """Turn seed into a :class:`numpy.random.Generator` instance

    :param seed:
        - ``None``: fresh OS entropy
        - ``int`` or :class:`numpy.random.SeedSequence`: new generator seeded with it
        - :class:`numpy.random.Generator`: returned as is

    :return:
        Random number generator
    :rtype:
        numpy.random.Generator

    .. seealso::

        `Scikit learn source code <https://github.com/scikit-learn/scikit-learn/blob/7813f7efb/sklearn/utils/validation.py#L763>`_
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, (int, np.integer, np.random.SeedSequence)):
        return np.random.default_rng(seed)
    raise ValueError('%r cannot be used to seed a numpy.random.Generator'
                     ' instance' % seed)


def replication_seed_sequence(master_seed, *keys):
    """Seed sequence of the stream labelled by ``keys`` (e.g. ``(cell, rep)``) under ``master_seed``.
    Distinct labels give statistically independent streams.
    """
    keys = tuple(int(k) for k in keys)
    if any(k < 0 for k in keys):
        raise ValueError('stream labels must be >= 0. Given: {}'.format(keys))
    return np.random.SeedSequence(int(master_seed), spawn_key=keys)


def replication_rng(master_seed, *keys):
    """Generator of the stream labelled by ``keys``, see :func:`replication_seed_sequence`"""
    return np.random.default_rng(replication_seed_sequence(master_seed, *keys))


def stream_seed(master_seed, *keys):
    """32-bit integer summarizing the stream labelled by ``keys``, recorded in result tables"""
    ss = replication_seed_sequence(master_seed, *keys)
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def resolve_n_jobs(n_jobs=None):
    """Number of worker threads: ``n_jobs`` if given, else the ``SPAVS_NUM_THREADS`` environment variable, else 1"""
    if n_jobs is None:
        env = os.environ.get(NUM_THREADS_ENV, '').strip()
        if not env:
            return 1
        try:
            n_jobs = int(env)
        except ValueError:
            raise ValueError('{} must be an integer. Given: {!r}'
                             .format(NUM_THREADS_ENV, env))

    n_jobs = int(n_jobs)
    if n_jobs == 0:
        raise ValueError('n_jobs must be nonzero (negative values count from the number of CPUs)')
    return n_jobs


def is_square(array):

    if array is None:
        return None

    shape = array.shape
    if len(shape) == 2 and len(set(shape)) == 1:
        return array
    else:
        raise ValueError('array not 2D square: shape={}'.format(shape))


def is_symmetric(array, tol=1e-12):
    """Check :math:`|M_{ij} - M_{ji}| \\leq` ``tol`` :math:`\\max(1, |M_{ij}|)` entrywise"""

    if array is None:
        return None

    array = is_square(array)

    scale = np.maximum(1.0, np.abs(array))
    if np.all(np.abs(array - array.T) <= tol * scale):
        return array
    else:
        raise ValueError('array not symmetric: M.T != M')


def is_finite(array):
    """Check no entry is NaN or infinite"""

    if array is None:
        return None
    elif np.all(np.isfinite(array)):
        return array
    else:
        raise ValueError('array with NaN or infinite entries')


def is_geq_0(array, tol=1e-8):
    """Check if entries are **all** :math:`\\geq0`, for a given tolerance"""

    if array is None:
        return None
    elif np.all(np.asarray(array) >= -tol):
        return array
    else:
        raise ValueError('array with entries not all >= 0')


def is_in_open_interval(value, low, high, name='value'):
    """Check ``low < value < high`` and return ``value``"""

    if low < value < high:
        return value
    else:
        err_print = ['`{}` must lie in ]{}, {}['.format(name, low, high),
                     'Given: {}'.format(value)]
        raise ValueError('\n'.join(err_print))


def get_progress_bar(total=-1, disable=False, **kwargs):
    """Helper function to get a tqdm progress bar (or a simple fallback otherwise)"""
    class ProgBar(object):
        def __init__(self, total=-1, disable=False, **kwargs):
            self.disable = disable
            self.t = 0
            self.total = total
            self.debug_string = ""

        def __enter__(self):
            return self

        def __exit__(self, *args, **kwargs):
            pass

        def set_postfix(self, **kwargs):
            self.debug_string = " ".join("{}={}".format(k, v)
                                         for k, v in kwargs.items())

        def update(self, n=1):
            self.t += n
            if not self.disable:
                print_str = "{}".format(self.t)
                if self.total > 0:
                    print_str += "/{}".format(self.total)
                print_str += ": {}".format(self.debug_string)
                print(print_str.ljust(80), end='\r', flush=True)

                if self.t == self.total:
                    print("")

        def close(self):
            pass

    try:
        from tqdm import tqdm
        progress_bar = tqdm(total=total, disable=disable, **kwargs)
    except ImportError:
        progress_bar = ProgBar(total=total, disable=disable)

    return progress_bar
