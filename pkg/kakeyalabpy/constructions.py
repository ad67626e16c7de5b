"""
Explicit progression-rich sets: the quadratic-residue union of
progressions and its digit powers, the Mockenhaupt-Tao set, and the
transfers between the integers and :math:`\\mathbf{F}_p^n`.
"""
import dataclasses
import logging
import math

import numpy as np
import sympy

from . import config
from . import exceptions as exc
from . import sets_base as sb
from . import sets_projections as sp
from . import _fp_lib as fp

logger = logging.getLogger(__name__)


def odd_primes(m):
    '''
    The first `m` odd primes, `[3, 5, 7, ...]`.
    '''
    return [int(sympy.prime(i)) for i in range(2, m + 2)]


def theorem_m(k):
    '''
    The number of primes used by the asymptotic construction,
    :math:`\\lceil 10 \\log k \\rceil` (at least 1).
    '''
    return max(1, math.ceil(10 * math.log(k))) if k > 1 else 1


@dataclasses.dataclass
class QRConstruction(sb.Record):
    k: int
    m: int
    primes: list
    Q: int
    S: sb.IntSet
    certificate: sb.APCertificate
    bound: int


def quadratic_residue_cover(k, m, cap=config.CAP_SIZE):
    '''
    The union of progressions
    :math:`S = \\bigcup_{d=1}^{Q-1} \\{x_d + jd : 0 \\le j < k\\}`,
    where `Q` is the product of the first `m` odd primes and
    :math:`x_d \\in \\{1, \\ldots, Q\\}` is congruent to :math:`d^2`.

    Modulo each prime :math:`p_i`, :math:`x_d + jd \\equiv (d + j/2)^2 -
    j^2/4`, so `S` meets at most :math:`(p_i + 1)/2` residues per `j`,
    which gives the bound :math:`\\#S \\le k^2 \\prod (p_i + 1)/2`.

    Args:
        k (int): Progression length, at least 1.
        m (int): Number of odd primes, at least 1.
        cap (int): Largest allowed :math:`kQ`.

    Returns:
        QRConstruction: The set with a certificate over
        :math:`\\{1, \\ldots, Q-1\\}`.
    '''
    assert k >= 1 and m >= 1, 'k and m must be positive.'
    primes = odd_primes(m)
    Q = math.prod(primes)
    if k * Q > cap:
        raise exc.InstanceTooLarge('k*Q', k * Q, cap)

    entries = {}
    points = set()
    for d in range(1, Q):
        x = (d * d) % Q or Q
        entries[d] = x
        points.update(x + j * d for j in range(k))
    S = sb.IntSet(points)
    cert = sb.APCertificate(k, entries)

    bad = cert.invalid_differences(S)
    if bad:
        raise exc.ConstructionError('quadratic_residue_cover misses %r' % (bad,))
    bound = k * k * math.prod((p + 1) // 2 for p in primes)
    if len(S) > bound:
        raise exc.ConstructionError(
            '#S = %d exceeds k^2 prod (p+1)/2 = %d' % (len(S), bound))
    logger.info('quadratic_residue_cover: k=%d Q=%d #S=%d bound=%d',
                k, Q, len(S), bound)
    return QRConstruction(k, m, primes, Q, S, cert, bound)


def digit_concatenate(C, n, cap=config.CAP_SIZE):
    '''
    :math:`A_n = \\{s_0 + s_1 Q + \\cdots + s_{n-1} Q^{n-1} : s_i \\in
    S\\}`.

    The base point for a difference :math:`d = \\sum d_i Q^i` is
    assembled digit by digit from the certificate of `C` (digit 0 uses
    :math:`\\min S`) and the result is checked against `A_n`.

    Args:
        C (QRConstruction): The one-digit construction.
        n (int): The number of digits.
        cap (int): Largest allowed :math:`(\\#S)^n`.

    Returns:
        tuple: `A_n` and a certificate over :math:`\\{0, \\ldots,
        Q^n - 1\\}`.
    '''
    assert n >= 1, 'n must be positive.'
    S, Q = C.S, C.Q
    if len(S) ** n > cap:
        raise exc.InstanceTooLarge('(#S)^n', len(S) ** n, cap)

    values = [0]
    for i in range(n):
        w = Q**i
        values = [v + s * w for v in values for s in S]
    A = sb.IntSet(values)

    digit_base = dict(C.certificate.entries)
    digit_base[0] = S.min
    entries = {}
    for d in range(Q**n):
        a, rest, w = 0, d, 1
        for _ in range(n):
            rest, di = divmod(rest, Q)
            a += digit_base[di] * w
            w *= Q
        entries[d] = a
    cert = sb.APCertificate(C.k, entries)

    bad = cert.invalid_differences(A)
    if bad:
        raise exc.ConstructionError(
            'digit_concatenate misses %d differences, first %r' % (len(bad), bad[:5]))
    return A, cert


@dataclasses.dataclass
class FUpperResult(sb.Record):
    k: int
    N: int
    m: int
    Q: int
    n: int
    A: sb.IntSet
    certificate: sb.APCertificate
    size: int
    exponent: float
    digit_exponent: float


def build_F_upper(k, N, m, cap=config.CAP_SIZE):
    '''
    An upper bound for :math:`F_k(N)`: the digit power `A_n` of the
    quadratic-residue set with `n` minimal such that :math:`Q^n > N`.

    Args:
        k (int): Progression length.
        N (int): Cover the differences :math:`1, \\ldots, N`.
        m (int): Number of odd primes.
        cap (int): Size cap passed on to the constructions.

    Returns:
        FUpperResult: The set, its certificate over
        :math:`\\{1, \\ldots, N\\}`, :math:`\\log \\#A / \\log N` (`None`
        for `N = 1`) and the per-digit exponent
        :math:`\\log \\#S / \\log Q`.
    '''
    assert N >= 1, 'N must be positive.'
    C = quadratic_residue_cover(k, m, cap=cap)
    n = 1
    while C.Q**n <= N:
        n += 1
    A, cert = digit_concatenate(C, n, cap=cap)
    cert = cert.restricted(range(1, N + 1))
    if len(A) > len(C.S) ** n:
        raise exc.ConstructionError('#A_n exceeds (#S)^n')
    # the digits of S span fewer than kQ integers
    if len(A) > k * C.Q**n:
        raise exc.ConstructionError('#A_n = %d exceeds k Q^n = %d'
                                    % (len(A), k * C.Q**n))
    exponent = math.log(len(A)) / math.log(N) if N > 1 else None
    digit_exponent = math.log(len(C.S)) / math.log(C.Q)
    logger.info('build_F_upper: k=%d N=%d m=%d n=%d #A=%d', k, N, m, n, len(A))
    return FUpperResult(k, N, m, C.Q, n, A, cert, len(A), exponent, digit_exponent)


def mockenhaupt_tao(p):
    '''
    The set :math:`V = \\{(u + v, uv) : u, v \\in \\mathbf{F}_p\\}`.

    `V` holds the line :math:`\\{(x, vx - v^2)\\}` for every `v`, so it
    contains a full line in each of the `p` non-vertical directions,
    and :math:`\\#V = p(p+1)/2`.

    Args:
        p (int): A prime.

    Returns:
        FpSet: `V` inside :math:`\\mathbf{F}_p^2`.
    '''
    p = fp.check_prime(p)
    V = fp.FpSet(p, 2, ((u + v, u * v) for u in range(p) for v in range(p)))
    if len(V) != p * (p + 1) // 2:
        raise exc.ConstructionError('#V = %d, expected %d' % (len(V), p * (p + 1) // 2))
    return V


@dataclasses.dataclass
class UnwrapResult(sb.Record):
    A: sb.IntSet
    count: int
    certificate: sb.APCertificate
    base: int


def fp_unwrap(A, k, certificate=None):
    '''
    Lifts a progression-rich subset of :math:`\\mathbf{F}_p^n` to the
    integers.

    Each certified progression :math:`x(d) + \\lambda d` is replaced by
    :math:`\\psi(x(d)) + \\lambda \\psi(d)` with
    :math:`\\psi : \\mathbf{F}_p \\to \\{0, \\ldots, p-1\\}`, which lands in
    :math:`\\{0, \\ldots, k(p-1)\\}^n`; the box is then collapsed to
    `Z` with :func:`~kakeyalabpy.sets_projections.freiman_collapse`.

    Args:
        A (FpSet): The set.
        k (int): Progression length.
        certificate (APCertificate): Progressions to lift.  Computed
            over the zero vector and every covered direction when
            omitted.

    Returns:
        UnwrapResult: The integer set, the number of distinct integer
        differences it certifies, the certificate and the collapse base.
    '''
    p, n = A.p, A.n
    if certificate is None:
        D = {fp.zero(n)} | fp.covered_directions(A, k) if len(A) else set()
        certificate = fp.verify_fp_cover(A, k, D)
    else:
        bad = certificate.invalid_differences(A)
        if bad:
            raise exc.PreconditionError(
                'certificate is invalid for differences %r' % (bad,), uncovered=bad)

    vectors = set()
    for d in certificate.differences:
        a = certificate[d]
        vectors.update(tuple(ai + lam * di for ai, di in zip(a, d))
                       for lam in range(k))
    if len(vectors) > k**n * len(A):
        raise exc.ConstructionError('unwrapping inflated the set beyond k^n #A')

    box = k * (p - 1) + 1
    base = sp.minimal_freiman_base(k, box, n)
    image = sp.freiman_collapse(vectors, box, k, base=base)

    def f(v):
        return sum(c * base**i for i, c in enumerate(v))

    cert = sb.APCertificate(k, {f(d): f(certificate[d]) for d in certificate.differences})
    bad = cert.invalid_differences(image)
    if bad:
        raise exc.ConstructionError('fp_unwrap lost differences %r' % (bad,))
    return UnwrapResult(image, len(cert), cert, base)


@dataclasses.dataclass
class WrapResult(sb.Record):
    A: fp.FpSet
    count: int
    t: int
    p: int
    M: int
    attempts: int
    threshold: float
    progression_length: int


def wrap_to_fp(A, k, N, n, p=None, seed=0, c=None, retries=config.RETRIES_WRAP):
    '''
    Wraps an integer cover into :math:`\\mathbf{F}_p^n`.

    `A` is first confined to :math:`\\{1, \\ldots, 10kN\\}` by
    :func:`~kakeyalabpy.sets_projections.cut_and_move`.  A shift
    `t` is then drawn from :math:`\\{-10kN, \\ldots, 20kN - 1\\}`, the
    shifted set is written in base :math:`M = \\lfloor N^{1/n}
    \\rfloor` to give :math:`A_3(t) \\subset \\{0, \\ldots, M-1\\}^n` and
    reduced mod `p`.  Shifts are redrawn until at least `cN` nonzero
    directions carry a progression of length :math:`\\lfloor k/2
    \\rfloor`.

    Args:
        A (IntSet): A cover of :math:`\\{1, \\ldots, N\\}` by `k`-term
            progressions.
        k (int): Progression length.
        N (int): Number of differences.
        n (int): Target dimension.
        p (int): A prime in :math:`[M, 2M)`.  Defaults to the smallest.
        seed (int): Seed of the shift stream.
        c (float): Acceptance density.  Defaults to
            :math:`2^{-n}/30k`.
        retries (int): Number of shifts to try.

    Returns:
        WrapResult: The wrapped set and its exact direction count.
    '''
    M = int(sympy.integer_nthroot(N, n)[0])
    if M < 2:
        raise exc.PreconditionError(
            'N = %d is too small for n = %d: M = floor(N^(1/n)) must be at least 2'
            % (N, n), M=M)
    if p is None:
        p = int(sympy.nextprime(M - 1))
    p = fp.check_prime(p)
    if not M <= p < 2 * M:
        raise exc.PreconditionError('p = %d is not in [%d, %d)' % (p, M, 2 * M), p=p, M=M)
    if c is None:
        c = 2.0**-n / (30 * k)
    threshold = c * N
    k2 = max(1, k // 2)

    A2 = sp.cut_and_move(A, k, N)
    L = 10 * k * N
    top = M**n
    rng = np.random.default_rng(seed)
    best = None
    for attempt in range(1, retries + 1):
        t = int(rng.integers(-L, 2 * L))
        digits = []
        for a in A2:
            v = a + t
            if 0 <= v < top:
                digits.append(tuple((v // M**i) % M for i in range(n)))
        A4 = fp.FpSet(p, n, digits)
        count = len(fp.covered_directions(A4, k2))
        logger.debug('wrap_to_fp: attempt %d t=%d covered=%d', attempt, t, count)
        if best is None or count > best[1]:
            best = (t, count)
        if count >= threshold:
            return WrapResult(A4, count, t, p, M, attempt, threshold, k2)
    raise exc.RetryBudgetExhausted('wrap_to_fp', retries, best=best)
