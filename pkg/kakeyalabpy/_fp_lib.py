"""
Arithmetic in :math:`\\mathbf{F}_p^n`.

Vectors are tuples of residues.  A vector is indexed by
:math:`\\sum_i v_i p^{n-1-i}`, so index order equals lexicographic
order, and sets are held both as frozensets and as boolean masks over
the indices.
"""
import itertools
import logging

import numpy as np
import sympy

from . import exceptions as exc
from . import sets_base as sb

logger = logging.getLogger(__name__)


def is_prime(p):
    return isinstance(p, (int, np.integer)) and sympy.isprime(int(p))


def check_prime(p):
    if not is_prime(p):
        raise exc.PreconditionError('%r is not prime' % (p,), p=p)
    return int(p)


def reduce(v, p):
    return tuple(int(c) % p for c in v)


def add(u, v, p):
    return tuple((a + b) % p for a, b in zip(u, v))


def sub(u, v, p):
    return tuple((a - b) % p for a, b in zip(u, v))


def scale(c, v, p):
    return tuple((c * a) % p for a in v)


def zero(n):
    return (0,) * n


def all_vectors(p, n):
    return itertools.product(range(p), repeat=n)


def nonzero_vectors(p, n):
    z = zero(n)
    return (v for v in all_vectors(p, n) if v != z)


def weights(p, n):
    return np.array([p**(n - 1 - i) for i in range(n)], dtype=np.int64)


def to_index(v, p):
    idx = 0
    for c in v:
        idx = idx * p + c
    return idx


def from_index(idx, p, n):
    out = [0] * n
    for i in range(n - 1, -1, -1):
        idx, out[i] = divmod(idx, p)
    return tuple(out)


def projective(d, p):
    '''
    Scales a nonzero vector so that its first nonzero coordinate is 1.
    '''
    for c in d:
        if c % p:
            inv = pow(int(c), -1, p)
            return scale(inv, d, p)
    raise ValueError('the zero vector has no direction')


class FpSet(object):
    '''
    A subset of :math:`\\mathbf{F}_p^n`.

    Args:
        p (int): A prime.
        n (int): The dimension, at least 1.
        points (iterable): Integer vectors of length `n`, reduced mod
            `p` on the way in.
    '''
    def __init__(self, p, n, points=()):
        self._p = check_prime(p)
        assert n >= 1, 'The dimension must be positive.'
        self._n = int(n)
        pts = set()
        for v in points:
            v = tuple(v) if not isinstance(v, (int, np.integer)) else (v,)
            assert len(v) == self._n, \
                'Vector %r does not have length %d.' % (v, self._n)
            pts.add(reduce(v, self._p))
        self._points = frozenset(pts)
        self._mask = None

    @classmethod
    def full(cls, p, n):
        return cls(p, n, all_vectors(p, n))

    @property
    def p(self):
        return self._p

    @property
    def n(self):
        return self._n

    @property
    def points(self):
        return self._points

    @property
    def mask(self):
        '''
        np.ndarray: Boolean membership over the :math:`p^n` indices.
        '''
        if self._mask is None:
            mask = np.zeros(self._p**self._n, dtype=bool)
            if self._points:
                mask[[to_index(v, self._p) for v in self._points]] = True
            self._mask = mask
        return self._mask

    def array(self):
        return np.array(sorted(self._points), dtype=np.int64).reshape(-1, self._n)

    def translate(self, t):
        return FpSet(self._p, self._n, (add(v, t, self._p) for v in self._points))

    def union(self, other):
        assert (self._p, self._n) == (other.p, other.n), 'Ambient spaces differ.'
        return FpSet(self._p, self._n, self._points | other.points)

    def __contains__(self, v):
        return reduce(v, self._p) in self._points

    def __iter__(self):
        return iter(sorted(self._points))

    def __len__(self):
        return len(self._points)

    def __eq__(self, other):
        if isinstance(other, FpSet):
            return (self._p, self._n, self._points) == (other.p, other.n, other.points)
        return NotImplemented

    def __hash__(self):
        return hash((self._p, self._n, self._points))

    def __repr__(self):
        return 'FpSet(p=%d, n=%d, size=%d)' % (self._p, self._n, len(self._points))


class FpPairSet(object):
    '''
    A set of pairs of vectors of :math:`\\mathbf{F}_p^n`.
    '''
    def __init__(self, p, n, pairs=()):
        self.p = check_prime(p)
        self.n = int(n)
        self.pairs = frozenset((reduce(x, p), reduce(y, p)) for x, y in pairs)

    def project(self, r):
        '''
        :math:`\\pi_r` with `r` a residue or `None` for infinity.
        '''
        p = self.p
        if r is None:
            return frozenset(y for _, y in self.pairs)
        return frozenset(add(x, scale(r, y, p), p) for x, y in self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self):
        return len(self.pairs)


def _progression_ok(A, d, k):
    '''
    Boolean per point `a` of `A`: does `a, a+d, ..., a+(k-1)d` lie in `A`.
    '''
    p = A.p
    P = A.array()
    if not len(P):
        return np.zeros(0, dtype=bool), P
    w = weights(p, A.n)
    mask = A.mask
    ok = np.ones(len(P), dtype=bool)
    dv = np.array(d, dtype=np.int64)
    for j in range(1, k):
        ok &= mask[((P + j * dv) % p) @ w]
    return ok, P


def progression_base(A, d, k):
    '''
    The lexicographically smallest base of a `k`-term progression of
    difference `d` in `A`, or `None`.
    '''
    ok, P = _progression_ok(A, reduce(d, A.p), k)
    hits = np.flatnonzero(ok)
    if not len(hits):
        return None
    return tuple(int(c) for c in P[hits[0]])


def verify_fp_cover(A, k, D):
    '''
    Finds a `k`-term progression of every difference of `D` in `A`.

    Args:
        A (FpSet): The set.
        k (int): Progression length.
        D (iterable): Vectors of :math:`\\mathbf{F}_p^n`.

    Returns:
        APCertificate or CoverFailure: Like
        :func:`kakeyalabpy.sets_projections.verify_cover`.
    '''
    entries = {}
    uncovered = []
    for d in sorted({reduce(d, A.p) for d in D}):
        a = progression_base(A, d, k)
        if a is None:
            uncovered.append(d)
        else:
            entries[d] = a
    if uncovered:
        return sb.CoverFailure(k, uncovered)
    return sb.APCertificate(k, entries, p=A.p)


def covered_directions(A, k):
    '''
    Every nonzero `d` for which `A` holds a `k`-term progression.
    '''
    return frozenset(d for d in nonzero_vectors(A.p, A.n)
                     if _progression_ok(A, d, k)[0].any())


def full_line_directions(A):
    '''
    The projective directions `d` (first nonzero coordinate 1) such that
    `A` contains a full line :math:`\\{a + td : t \\in \\mathbf{F}_p\\}`.
    '''
    p = A.p
    found = set()
    for d in nonzero_vectors(p, A.n):
        if projective(d, p) != d:
            continue
        if _progression_ok(A, d, p)[0].any():
            found.add(d)
    logger.debug('full_line_directions: %d of %d directions', len(found),
                 (p**A.n - 1) // (p - 1))
    return frozenset(found)


def line(a, d, p):
    return [add(a, scale(t, d, p), p) for t in range(p)]
