"""
Compression arguments.

:func:`distinct_to_full` turns progressions with `N` arbitrary distinct
differences into a cover of :math:`\\{1, \\ldots, N\\}` through the
multiplicative shift :math:`\\phi_\\theta(x) = \\lfloor N\\{\\theta x\\}
\\rfloor`; :func:`random_linear_compress` pushes a union of lines in
:math:`\\mathbf{F}_p^M` down to :math:`\\mathbf{F}_p^n` with a random
linear map.  Both resample until the expectation bound of the
argument is met and then verify the output directly.
"""
import collections
import dataclasses
import fractions
import logging
import math

import numpy as np

from . import config
from . import covering
from . import exceptions as exc
from . import sets_base as sb
from . import sets_projections as sp
from . import _fp_lib as fp

logger = logging.getLogger(__name__)

#: Constant `C` in :math:`\\#A_1 \\le C k^3 (1 + \\log N) \\#A_0`.
SIZE_CONSTANT = 12
#: Grid fineness factor for sampling theta.
GRID_FACTOR = 2**16


class ThetaMap(object):
    '''
    :math:`\\phi_\\theta(x) = \\lfloor N \\{\\theta x\\} \\rfloor`, evaluated
    exactly.

    Args:
        theta (Fraction): A rational in :math:`(0, 1)`.
        N (int): The range :math:`\\{0, \\ldots, N-1\\}`.
    '''
    def __init__(self, theta, N):
        theta = fractions.Fraction(theta)
        assert 0 < theta < 1, 'theta must lie in (0, 1).'
        assert N >= 1, 'N must be positive.'
        self.theta = theta
        self.N = int(N)

    def __call__(self, x):
        num, den = self.theta.numerator, self.theta.denominator
        return (self.N * ((num * x) % den)) // den

    def __repr__(self):
        return 'ThetaMap(theta=%s, N=%d)' % (self.theta, self.N)


def phi_theta(x, theta_map):
    return theta_map(x)


def _uniform_below(rng, G):
    '''
    A uniform integer in :math:`\\{1, \\ldots, G-1\\}`, exact for any `G`.
    '''
    if G < 2**62:
        return int(rng.integers(1, G))
    bits = G.bit_length()
    nbytes = (bits + 7) // 8
    while True:
        v = int.from_bytes(rng.bytes(nbytes), 'little') >> (8 * nbytes - bits)
        if 1 <= v < G:
            return v


def collision_pairs(values):
    return sum(c * (c - 1) // 2 for c in collections.Counter(values).values())


@dataclasses.dataclass
class DistinctToFullResult(sb.Record):
    A: sb.IntSet
    certificate: sb.APCertificate
    theta: fractions.Fraction
    T: sb.IntSet
    attempts: int
    collisions: int
    distinct: int
    bound: float


def distinct_to_full(A0, certificate, k, N, seed=0, retries=config.RETRIES):
    '''
    Builds a cover of :math:`\\{1, \\ldots, N\\}` from progressions with
    `N` distinct differences.

    `theta` is drawn from the grid :math:`\\{a/G\\}`,
    :math:`G = 2^{16} N \\max|d_i|`, until the compressed differences
    :math:`d'_i = \\phi_\\theta(d_i)` have at most :math:`N-1` colliding
    pairs (so at least `N/3` distinct values).  Then

    * :math:`A_3 = \\phi_\\theta(A_0) + \\{0, \\ldots, k-1\\} - \\{0, N,
      \\ldots, (k-1)N\\}` holds a progression of difference
      :math:`d'_i` for every `i`,
    * `T` is a greedy cover of :math:`\\{1, \\ldots, N\\}` by translates
      of the :math:`d'_i`, and
    * :math:`A_1 = A_3 + \\{0, \\ldots, k-1\\} \\cdot T`.

    Args:
        A0 (IntSet): The input set.
        certificate (APCertificate): Progressions of `A0` with at least
            `N` distinct differences; the `N` smallest are used.
        k (int): Progression length.
        N (int): Number of differences.
        seed (int): Seed of the theta stream.
        retries (int): Number of theta samples.

    Returns:
        DistinctToFullResult: `A1`, its certificate over
        :math:`\\{1, \\ldots, N\\}` and the accepted `theta`.
    '''
    A0 = sb.IntSet(A0)
    bad = certificate.invalid_differences(A0)
    if bad:
        raise exc.PreconditionError('certificate is invalid for %r' % (bad,),
                                    uncovered=bad)
    ds = certificate.differences[:N]
    if len(ds) < N:
        raise exc.PreconditionError(
            'certificate has %d differences, %d needed' % (len(ds), N))

    G = max(2, GRID_FACTOR * N * max(max(abs(d) for d in ds), 1))
    rng = np.random.default_rng(seed)
    accepted = None
    for attempt in range(1, retries + 1):
        theta = fractions.Fraction(_uniform_below(rng, G), G)
        phi = ThetaMap(theta, N)
        dprime = [phi(d) for d in ds]
        collisions = collision_pairs(dprime)
        logger.debug('distinct_to_full: attempt %d theta=%s collisions=%d',
                     attempt, theta, collisions)
        if collisions <= N - 1:
            accepted = (attempt, theta, phi, dprime, collisions)
            break
    if accepted is None:
        raise exc.RetryBudgetExhausted('distinct_to_full', retries)
    attempt, theta, phi, dprime, collisions = accepted

    distinct = len(set(dprime))
    if 3 * distinct < N:
        raise exc.ConstructionError(
            'only %d distinct compressed differences for N = %d' % (distinct, N))

    A2 = {phi(a) for a in A0}
    offsets = {i - j * N for i in range(k) for j in range(k)}
    A3 = {a + o for a in A2 for o in offsets}

    T = covering.greedy_translate_cover_int(sorted({d + 1 for d in set(dprime)}), N)
    T = T.translate(1)
    shifts = {j * t for t in T for j in range(k)}
    A1 = sb.IntSet(a + s for a in A3 for s in shifts)

    cert = sp.verify_cover(A1, k, range(1, N + 1))
    if not cert.ok:
        raise exc.ConstructionError(
            'distinct_to_full misses differences %r' % (cert.uncovered,))
    bound = SIZE_CONSTANT * k**3 * (1 + math.log(N)) * len(A0)
    if len(A1) > bound:
        raise exc.ConstructionError('#A1 = %d exceeds %g' % (len(A1), bound))
    logger.info('distinct_to_full: #A0=%d #A3=%d #T=%d #A1=%d theta=%s',
                len(A0), len(A3), len(T), len(A1), theta)
    return DistinctToFullResult(A1, cert, theta, T, attempt, collisions,
                                distinct, bound)


def minimal_dimension(p, N):
    n = 1
    while p**n < N:
        n += 1
    return n


@dataclasses.dataclass
class LinearCompressionResult(sb.Record):
    A: fp.FpSet
    count: int
    n: int
    matrix: np.ndarray
    directions: frozenset
    attempts: int


def random_linear_compress(A, D, seed=0, certificate=None, matrix=None,
                           retries=config.RETRIES):
    '''
    Projects a union of lines of :math:`\\mathbf{F}_p^M` to
    :math:`\\mathbf{F}_p^n`, `n` minimal with :math:`p^n \\ge \\#D`.

    A random linear map is drawn until at least half of the line
    directions keep distinct nonzero images.  Lines map to lines, which
    is checked on the image.

    Args:
        A (FpSet): The set.
        D (iterable): Directions in which `A` holds a full line.
        seed (int): Seed of the matrix stream.
        certificate (APCertificate): Full lines of `A` (`k = p`) over
            `D`.  Computed when omitted.
        matrix (array): An `n` by `M` matrix to replay instead of
            sampling.
        retries (int): Number of matrices to try.

    Returns:
        LinearCompressionResult: The image, the surviving direction
        count and the accepted matrix.
    '''
    p, M = A.p, A.n
    D = sorted({fp.reduce(d, p) for d in D})
    N = len(D)
    if not N:
        raise exc.PreconditionError('no directions to compress')
    if certificate is None:
        certificate = fp.verify_fp_cover(A, p, D)
    if not certificate.ok:
        raise exc.PreconditionError(
            'A holds no full line in directions %r' % (certificate.uncovered,),
            uncovered=certificate.uncovered)
    n = minimal_dimension(p, N)

    P = A.array()
    Darr = np.array(D, dtype=np.int64).reshape(N, M)
    if matrix is not None:
        candidates = [np.asarray(matrix, dtype=np.int64) % p]
        assert candidates[0].shape[1] == M, 'matrix must have %d columns' % M
        n = candidates[0].shape[0]
    else:
        rng = np.random.default_rng(seed)
        candidates = (rng.integers(0, p, (n, M)) for _ in range(retries))

    best = None
    for attempt, pi in enumerate(candidates, 1):
        images = {tuple(int(c) for c in row) for row in (Darr @ pi.T) % p}
        images.discard(fp.zero(n))
        count = len(images)
        if best is None or count > best[1]:
            best = (pi.tolist(), count)
        if 2 * count >= N or matrix is not None:
            image = fp.FpSet(p, n, ((P @ pi.T) % p).tolist())
            check = fp.verify_fp_cover(image, p, images)
            if not check.ok:
                raise exc.ConstructionError(
                    'line images are not lines for %r' % (check.uncovered,))
            logger.info('random_linear_compress: M=%d n=%d #A=%d -> %d, '
                        'directions %d -> %d', M, n, len(A), len(image), N, count)
            return LinearCompressionResult(image, count, n, pi, frozenset(images),
                                           attempt)
    raise exc.RetryBudgetExhausted('random_linear_compress', retries, best=best)
