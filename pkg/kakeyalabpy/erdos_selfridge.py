"""
The interval-coverage quantity :math:`G_k(N)`: the least number of
multiples of :math:`p_1 < \\cdots < p_N` in an interval of length
:math:`kp_N`, and the two inequalities
:math:`F'_k(N) \\le G_k(N) \\le kF'_k(N)`.

The upper inequality needs primes :math:`d_i u + v` in a short
interval, which is found here by a bounded search.
"""
import dataclasses
import fractions
import functools
import itertools
import logging
import math

import numpy as np
import sympy
import tqdm
from sympy.ntheory.modular import crt

from . import config
from . import exceptions as exc
from . import oracle
from . import sets_base as sb
from . import sets_projections as sp

logger = logging.getLogger(__name__)

_CHUNK = 1 << 22
_INT64_SAFE = 2**62


@dataclasses.dataclass
class ESInstance(sb.Record):
    '''
    Primes :math:`p_1 < \\cdots < p_N`, a length factor `k` and the
    interval :math:`\\{w, \\ldots, w + kp_N - 1\\}`.
    '''
    primes: list
    k: int
    w: int

    def __post_init__(self):
        self.primes = [int(p) for p in self.primes]
        assert self.primes, 'At least one prime is needed.'
        assert all(a < b for a, b in zip(self.primes, self.primes[1:])), \
            'Primes must be strictly increasing.'
        for p in self.primes:
            if not sympy.isprime(p):
                raise exc.PreconditionError('%d is not prime' % p, p=p)
        assert self.k >= 1, 'k must be positive.'

    @property
    def length(self):
        return self.k * self.primes[-1]

    @property
    def interval(self):
        return range(self.w, self.w + self.length)

    def multiples(self):
        return sb.IntSet(x for x in self.interval
                         if any(x % p == 0 for p in self.primes))


def interval_multiple_count(inst):
    '''
    :math:`\\#(I \\cap \\bigcup_i p_i \\mathbf{Z})`.
    '''
    lo, L = inst.w, inst.length
    if abs(lo) + L < _INT64_SAFE:
        x = np.arange(lo, lo + L, dtype=np.int64)
        hit = np.zeros(L, dtype=bool)
        for p in inst.primes:
            hit |= x % p == 0
        return int(hit.sum())
    return len(inst.multiples())


def _count_by_inclusion_exclusion(w, L, primes):
    '''
    Counts for an array of interval starts `w` in :math:`[0, 2^{62} - L]`.
    '''
    w = np.asarray(w, dtype=np.int64)
    assert np.all(w >= 0) and np.all(w <= _INT64_SAFE - L), \
        'interval starts must lie in [0, 2^62 - L]'
    total = np.zeros(len(w), dtype=np.int64)
    for r in range(1, len(primes) + 1):
        sign = 1 if r % 2 else -1
        for combo in itertools.combinations(primes, r):
            m = math.prod(combo)
            if m > _INT64_SAFE:
                # 0 is the only multiple of m below 2^62
                total += sign * (w == 0).astype(np.int64)
                continue
            total += sign * ((w + L - 1) // m - (w - 1) // m)
    return total


@dataclasses.dataclass
class IntervalMinimum(sb.Record):
    primes: list
    k: int
    w: int
    count: int
    exhaustive: bool
    period: int


def min_over_intervals(primes, k, search_mode='auto', samples=config.ES_SAMPLES,
                       seed=0, exact_period=config.ES_EXACT_PERIOD, progress=False):
    '''
    The least multiple count over all intervals of length
    :math:`kp_N`.

    The count is periodic in the start `w` with period
    :math:`\\mathrm{lcm}(p_i)`.  In exact mode one full period is swept
    with a cumulative sum over chunks; otherwise `samples` random
    starts are tried and the result is flagged as not exhaustive.

    Args:
        primes (list): Increasing primes.
        k (int): Length factor.
        search_mode (str): `'exact'`, `'sample'` or `'auto'` (exact
            when the period is at most `exact_period`).
        samples (int): Number of random starts in sample mode.
        seed (int): Seed of the random starts.
        exact_period (int): Largest period swept in auto mode.
        progress (bool): Show a progress bar over the chunks.

    Returns:
        IntervalMinimum: The minimizing start (smallest on ties) and the
        count.
    '''
    primes = sorted(int(p) for p in primes)
    ESInstance(primes, k, 0)
    period = functools.reduce(lambda a, b: a * b // math.gcd(a, b), primes, 1)
    L = k * primes[-1]
    if search_mode == 'auto':
        search_mode = 'exact' if period <= exact_period else 'sample'
    assert search_mode in ('exact', 'sample'), 'unknown search mode %r' % search_mode

    if search_mode == 'exact':
        best_w, best = None, None
        starts = range(0, period, _CHUNK)
        for s in tqdm.tqdm(starts, ncols=70, disable=not progress):
            n = min(_CHUNK, period - s)
            hit = np.zeros(n + L, dtype=bool)
            for p in primes:
                hit[(-s) % p::p] = True
            cs = np.concatenate(([0], np.cumsum(hit, dtype=np.int64)))
            counts = cs[L:L + n] - cs[:n]
            i = int(np.argmin(counts))
            if best is None or counts[i] < best:
                best, best_w = int(counts[i]), s + i
        exhaustive = True
    else:
        rng = np.random.default_rng(seed)
        top = min(period, _INT64_SAFE - L)
        w = rng.integers(0, top, size=samples, dtype=np.int64)
        counts = _count_by_inclusion_exclusion(w, L, primes)
        i = int(np.argmin(counts))
        best, best_w = int(counts[i]), int(w[i])
        exhaustive = False

    check = interval_multiple_count(ESInstance(primes, k, best_w))
    if check != best:
        raise exc.ConstructionError('sweep count %d disagrees with direct count %d'
                                    % (best, check))
    logger.debug('min_over_intervals: primes=%s k=%d -> w=%d count=%d (%s)',
                 primes, k, best_w, best, search_mode)
    return IntervalMinimum(primes, k, best_w, best, exhaustive, period)


def derive_delta(A, ds, k):
    '''
    The largest :math:`\\delta` for which primes in
    :math:`[(1-\\delta)X, X]` make the interval construction work.

    Two conditions are needed: :math:`v/u > 4\\max A`, which holds for
    every :math:`\\delta < 1/(4\\max A + 1)` and is met here by
    :math:`\\delta = 1/(4\\max A + 2)`, and :math:`p_i/p_N \\ge 1 -
    1/4k`, which holds for :math:`\\delta \\le 1/(1 + (4k-1)d_N)`.
    Together they give :math:`p_i > p_N/2 + u\\max A`.

    Args:
        A (IntSet): A set of positive integers.
        ds (list): The differences :math:`d_1 < \\cdots < d_N`.
        k (int): Progression length.

    Returns:
        tuple: `delta` as a `Fraction` and the name of the binding
        condition, `'v/u > 4 max A'` or `'p_i/p_N >= 1 - 1/4k'`.
    '''
    maxA = max(A)
    assert min(A) > 0, 'A must consist of positive integers.'
    d_N = max(ds)
    delta1 = fractions.Fraction(1, 4 * maxA + 2)
    delta2 = fractions.Fraction(1, 1 + (4 * k - 1) * d_N)
    if delta1 <= delta2:
        return delta1, 'v/u > 4 max A'
    return delta2, 'p_i/p_N >= 1 - 1/4k'


def _sieve(limit):
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for i in range(2, int(limit**0.5) + 1):
        if is_p[i]:
            is_p[i * i::i] = False
    return is_p


@dataclasses.dataclass
class PrimePattern(sb.Record):
    u: int
    v: int
    X: int
    primes: list
    delta: fractions.Fraction


def prime_pattern_search(ds, delta, X_max=10**6, min_X=0):
    '''
    Looks for `u`, `v` with :math:`v` and every :math:`d_i u + v` prime
    and inside :math:`[(1-\\delta)X, X]`, :math:`X = d_N u + v`.

    `u` runs upwards and, for each `u`, the least admissible `v` is
    read off a sieve.  The pattern with the smallest `X` is returned.

    Args:
        ds (list): Positive differences.
        delta (Fraction): Interval width, in :math:`(0, 1/2)`.
        X_max (int): Largest `X` searched.
        min_X (int): Smallest `X` accepted.

    Returns:
        PrimePattern: The pattern, or `None` when none exists below
        `X_max`.
    '''
    ds = sorted(int(d) for d in ds)
    assert ds and ds[0] > 0, 'Differences must be positive.'
    delta = fractions.Fraction(delta)
    assert 0 < delta < 1, 'delta must lie in (0, 1).'
    d_N = ds[-1]
    is_p = _sieve(X_max)
    best = None
    u = 1
    while True:
        v_lo = max(2, math.ceil((1 - delta) * d_N * u / delta), min_X - d_N * u)
        if d_N * u + v_lo > X_max or (best is not None and d_N * u + v_lo > best.X):
            break
        top = best.X if best is not None else X_max
        v = np.arange(v_lo, top - d_N * u + 1, dtype=np.int64)
        ok = is_p[v].copy()
        for d in ds:
            ok &= is_p[v + d * u]
        hits = np.flatnonzero(ok)
        if len(hits):
            vv = int(v[hits[0]])
            X = d_N * u + vv
            if best is None or X < best.X:
                best = PrimePattern(u, vv, X, [d * u + vv for d in ds], delta)
        u += 1
    if best is not None:
        logger.debug('prime_pattern_search: ds=%s u=%d v=%d X=%d',
                     ds, best.u, best.v, best.X)
    return best


@dataclasses.dataclass
class RealizedInterval(sb.Record):
    instance: ESInstance
    count: int
    claim_holds: bool
    size_bound: int


def realize_interval(A, certificate, k, pattern):
    '''
    Builds the interval of the upper inequality from a prime pattern.

    With :math:`p_i = d_i u + v`, the Chinese remainder theorem gives
    `w` with :math:`p_i \\mid w + ua_i`, and
    :math:`I = w - \\lfloor p_N/2 \\rfloor + \\{1, \\ldots, kp_N\\}`.
    The claim :math:`I \\cap p_i\\mathbf{Z} = \\{w + ua_i + jp_i : 0 \\le j
    < k\\}` is checked for each `i` by enumeration.

    Args:
        A (IntSet): A set of positive integers.
        certificate (APCertificate): Progressions of `A` with the
            differences of the pattern.
        k (int): Progression length.
        pattern (PrimePattern): The primes.

    Returns:
        RealizedInterval: The instance, its multiple count, whether the
        claim holds, and :math:`\\#(uA + \\{0, v, \\ldots, (k-1)v\\})`.
    '''
    ds = sorted(certificate.differences)
    u, v = pattern.u, pattern.v
    primes = [d * u + v for d in ds]
    residues = [(-u * certificate[d]) % p for d, p in zip(ds, primes)]
    w = int(crt(primes, residues)[0])
    p_N = primes[-1]
    inst = ESInstance(primes, k, w - p_N // 2 + 1)
    interval = inst.interval
    claim = True
    for d, p in zip(ds, primes):
        found = [x for x in interval if x % p == 0]
        expected = [w + u * certificate[d] + j * p for j in range(k)]
        if found != expected:
            claim = False
            logger.info('realize_interval: claim fails for p=%d', p)
    A_prime = {u * a + j * v for a in A for j in range(k)}
    return RealizedInterval(inst, interval_multiple_count(inst), claim, len(A_prime))


def sandwich_check(k, N, primes=None, prime_bound=30, X_max=10**6,
                   window_cap=config.CAP_WINDOW, progress=False):
    '''
    Checks :math:`F'_k(N) \\le G_k(N) \\le kF'_k(N)` on one instance.

    `G` is the exact minimum over the intervals for the given primes,
    or over every `N`-subset of the primes up to `prime_bound`.  The
    lower inequality is witnessed by the multiples in the minimizing
    interval, which hold a `k`-term progression of every difference
    :math:`p_i`.  The upper one is realized from an optimal
    :math:`F'` set through :func:`prime_pattern_search` and
    :func:`realize_interval`.

    Returns:
        dict: The values, the realized instance (if any) and the checks.
    '''
    Fp = oracle.min_distinct_cover(k, N, window_cap=window_cap)
    if primes is not None:
        candidates = [sorted(primes)]
    else:
        pool = list(sympy.primerange(2, prime_bound + 1))
        if len(pool) < N:
            raise exc.PreconditionError(
                'only %d primes up to %d' % (len(pool), prime_bound), prime_bound=prime_bound)
        candidates = [list(c) for c in itertools.combinations(pool, N)]

    best = None
    for ps in tqdm.tqdm(candidates, ncols=70, disable=not progress):
        res = min_over_intervals(ps, k)
        if best is None or res.count < best.count:
            best = res
    inst = ESInstance(best.primes, k, best.w)
    multiples = inst.multiples()
    left_cert = sp.verify_cover(multiples, k, inst.primes)

    report = {'k': k, 'N': N, "F'": Fp.optimum, 'G': best.count,
              'G_instance': inst, 'G_exhaustive': best.exhaustive and Fp.exhausted,
              'left_mechanism': left_cert.ok}

    A = Fp.witness.translate(1)
    cert = sp.verify_cover(A, k, Fp.certificate.differences)
    delta, binding = derive_delta(A, cert.differences, k)
    pattern = prime_pattern_search(cert.differences, delta, X_max=X_max)
    report.update({'delta': delta, 'delta_binding': binding})
    G = best.count
    if pattern is None:
        report['right'] = None
        report['right_demonstrated'] = False
    else:
        realized = realize_interval(A, cert, k, pattern)
        report['right'] = {'u': pattern.u, 'v': pattern.v, 'X': pattern.X,
                           'instance': realized.instance, 'count': realized.count,
                           'claim_holds': realized.claim_holds,
                           'size_bound': realized.size_bound}
        report['right_demonstrated'] = realized.claim_holds \
            and realized.count <= k * Fp.optimum
        G = min(G, realized.count)
    report['G_upper'] = G
    report['left_holds'] = Fp.optimum <= best.count
    report['right_holds'] = G <= k * Fp.optimum
    report['ok'] = report['left_mechanism'] and report['left_holds'] \
        and report['right_holds']
    logger.info("sandwich_check: k=%d N=%d F'=%d G=%d", k, N, Fp.optimum, G)
    return report
