# coding: utf8
""" Errors raised by :py:mod:`spavs`.

All of them derive from :class:`ValueError`, so that ``except ValueError`` keeps catching every invalid-input situation.
"""


class SingularSubmatrix(ValueError):
    """The block of :math:`V_1` indexed by a candidate set :math:`K` is numerically singular.
    This signals a degenerate design, not a bug.

    :param index:
        1-based index :math:`i` of the failing set, if any: the leave-one-out set :math:`K_i=I\\setminus\\{i\\}`
        or the nested set :math:`J_i=\\{\\tau(1), \\dots, \\tau(i)\\}`.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DegenerateSample(ValueError):
    """Fewer than two sites are available to center and average."""


class GridTooLarge(ValueError):
    """Grid too large for a dense factorization of the error field covariance."""


class FoldTooSmall(ValueError):
    """A cross-validation training fold retains fewer than :math:`p+1` sites."""


class AllFoldsFailed(ValueError):
    """Every cross-validation fold (or every tuning grid point) failed."""


class NotUnivariateResponse(ValueError):
    """Penalized least squares comparators require :math:`q=1`."""


class EmptyCell(ValueError):
    """No result is available to summarize."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""
