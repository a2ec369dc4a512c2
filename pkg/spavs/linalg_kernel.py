# coding: utf8
""" Dense linear algebra consumed by the criterion:

- :class:`IndexSet`, subsets :math:`K` of :math:`I=\\{1, \\dots, p\\}` (1-based, as in the definitions)
- :func:`outer_product`, the tensor product :math:`(u\\otimes v)(h)=\\langle u,h\\rangle v`
- :func:`hs_norm`, the Hilbert-Schmidt norm :math:`\\|T\\|_{\\mathcal{H}}=\\sqrt{\\operatorname{tr}(TT^*)}`
- :func:`restricted_projector`, :math:`\\Pi_K = A_K^{\\top}(A_K V_1 A_K^{\\top})^{-1}A_K`

.. seealso:

    `Documentation <docs/criterion/index.rst>`_
"""

import numpy as np
import scipy.linalg as la

from spavs.exceptions import SingularSubmatrix
from spavs.utils import is_finite, is_symmetric

# reciprocal condition number below which A_K V_1 A_K^T is declared singular
RCOND_TOL = 1e-12


class IndexSet:
    """ Subset :math:`K=\\{k_1 < \\dots < k_r\\}` of the ambient set :math:`I=\\{1, \\dots, p\\}`

    :param members:
        Indices in :math:`\\{1, \\dots, p\\}`, 1-based. They are sorted, duplicates are rejected.
    :type members:
        iterable of int

    :param ambient:
        Size :math:`p` of the ambient set
    :type ambient:
        int

    :param allow_empty:
        The empty set is refused unless explicitly allowed
    :type allow_empty:
        bool, default ``False``
    """

    def __init__(self, members, ambient, allow_empty=False):

        members = [int(k) for k in members]
        ambient = int(ambient)

        if ambient < 1:
            raise ValueError('ambient size must be >= 1. Given: {}'.format(ambient))
        if len(set(members)) != len(members):
            raise ValueError('duplicated indices. Given: {}'.format(members))
        if any(not (1 <= k <= ambient) for k in members):
            err_print = ['indices must lie in {{1, ..., {}}}'.format(ambient),
                         'Given: {}'.format(members)]
            raise ValueError('\n'.join(err_print))
        if not members and not allow_empty:
            raise ValueError('empty index set, use allow_empty=True if intended')

        self.members = tuple(sorted(members))
        self.ambient = ambient

    @classmethod
    def full(cls, p):
        """The whole ambient set :math:`I=\\{1, \\dots, p\\}`"""
        return cls(range(1, p + 1), p)

    def without(self, i):
        """:math:`K\\setminus\\{i\\}`, e.g. :math:`K_i=I\\setminus\\{i\\}` from :py:meth:`full`"""
        return IndexSet([k for k in self.members if k != i], self.ambient,
                        allow_empty=True)

    def complement(self):
        return IndexSet([k for k in range(1, self.ambient + 1)
                         if k not in self.members],
                        self.ambient, allow_empty=True)

    def issubset(self, other):
        return set(self.members).issubset(other)

    @property
    def zero_based(self):
        """Array of 0-based positions, for indexing numpy arrays"""
        return np.array(self.members, dtype=int) - 1

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, k):
        return k in self.members

    def __eq__(self, other):
        if isinstance(other, IndexSet):
            return self.members == other.members and self.ambient == other.ambient
        try:
            return set(self.members) == set(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.members, self.ambient))

    def __repr__(self):
        return 'IndexSet({}, ambient={})'.format(list(self.members), self.ambient)

    def __str__(self):
        return '{' + ', '.join(map(str, self.members)) + '}'


def outer_product(u, v):
    """ Matrix of the rank one map :math:`(u\\otimes v)(h)=\\langle u,h\\rangle v`, i.e., :math:`v u^{\\top}`

    :param u:
        Vector of size :math:`m`
    :param v:
        Vector of size :math:`r`

    :return:
        :math:`r\\times m` matrix with entries :math:`v_i u_j`
    :rtype:
        array_like
    """
    u = is_finite(np.asarray(u, dtype=float).ravel())
    v = is_finite(np.asarray(v, dtype=float).ravel())

    return np.outer(v, u)


def hs_norm(M):
    """ Hilbert-Schmidt norm :math:`\\sqrt{\\operatorname{tr}(MM^{\\top})}`, i.e., the Frobenius norm
    """
    M = is_finite(np.atleast_2d(np.asarray(M, dtype=float)))

    return np.sqrt(np.sum(M**2))


def _factor_block(V_KK):
    # Cholesky factor of the SPD block, refused when ill-conditioned
    sv = la.svdvals(V_KK)
    rcond = sv[-1] / sv[0] if sv[0] > 0 else 0.0

    if not rcond >= RCOND_TOL:
        raise SingularSubmatrix(
            'K x K block of V1 is singular: reciprocal condition number {:.3e} < {:.0e}'
            .format(rcond, RCOND_TOL))

    try:
        return la.cho_factor(V_KK, lower=True, check_finite=False)
    except la.LinAlgError as e:
        raise SingularSubmatrix('K x K block of V1 is not positive definite: {}'
                                .format(e))


def restricted_solve(K, V1, rhs):
    """ Compute :math:`(A_K V_1 A_K^{\\top})^{-1} A_K` ``rhs`` by a Cholesky solve of the :math:`|K|\\times|K|` block.

    :return:
        :math:`|K|\\times` ``rhs.shape[1]`` array
    """
    idx = K.zero_based
    cho = _factor_block(V1[np.ix_(idx, idx)])

    return la.cho_solve(cho, rhs[idx], check_finite=False)


def restricted_projector(K, V1):
    """ Compute :math:`\\Pi_K = A_K^{\\top}(A_K V_1 A_K^{\\top})^{-1}A_K`, where :math:`A_K` extracts the :math:`K`-coordinates.

    :param K:
        Non empty candidate set
    :type K:
        :class:`IndexSet`

    :param V1:
        Symmetric :math:`p\\times p` matrix, with invertible :math:`K\\times K` block
    :type V1:
        array_like

    :return:
        :math:`p\\times p` matrix, zero outside the :math:`K\\times K` block, satisfying :math:`\\Pi_K V_1 \\Pi_K = \\Pi_K`
    :rtype:
        array_like

    :raises SingularSubmatrix:
        if the reciprocal condition number of the :math:`K\\times K` block is below :py:data:`RCOND_TOL`

    .. note::

        Only the :math:`|K|\\times|K|` block is factorized (Cholesky), :math:`V_1` itself is never inverted.
    """
    V1 = is_symmetric(is_finite(np.asarray(V1, dtype=float)))
    p = V1.shape[0]

    if K.ambient != p:
        raise ValueError('K lives in {{1, ..., {}}} but V1 is {}x{}'
                         .format(K.ambient, p, p))
    if not len(K):
        raise ValueError('restricted projector undefined for the empty set')

    idx = K.zero_based
    Pi = np.zeros((p, p))
    Pi[np.ix_(idx, idx)] = restricted_solve(K, V1, np.eye(p))[:, idx]

    return Pi
