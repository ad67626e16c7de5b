"""
Exact entropy computations for finitely supported random variables.

Probabilities are kept as exact rationals; logarithms are only taken in
:func:`entropy`, and natural logarithms are used throughout.
"""
import collections
import dataclasses
import fractions
import logging
import math

import numpy as np
import scipy.optimize
from scipy.special import gammaln

from . import config
from . import exceptions as exc
from . import sets_base as sb
from . import sets_projections as sp
from . import _fp_lib as fp

logger = logging.getLogger(__name__)

AMBIENTS = ('Z', 'Zn', 'Fp')


def _lcm_denominator(weights):
    L = 1
    for w in weights:
        L = L * w.denominator // math.gcd(L, w.denominator)
    return L


class DiscreteDist(object):
    '''
    A finitely supported distribution with exact rational weights.

    Args:
        mass (dict): Value to weight.  Weights must be positive and sum
            to exactly 1.
    '''
    def __init__(self, mass):
        mass = {v: fractions.Fraction(w) for v, w in mass.items()}
        if any(w <= 0 for w in mass.values()):
            raise ValueError('weights must be positive')
        if sum(mass.values()) != 1:
            raise ValueError('weights must sum to 1, not %s' % sum(mass.values()))
        self._mass = mass

    @classmethod
    def uniform(cls, values):
        values = set(values)
        w = fractions.Fraction(1, len(values))
        return cls({v: w for v in values})

    @classmethod
    def point(cls, value):
        return cls({value: 1})

    @property
    def mass(self):
        return self._mass

    @property
    def support(self):
        return frozenset(self._mass)

    @property
    def weights(self):
        return list(self._mass.values())

    def __len__(self):
        return len(self._mass)

    def __repr__(self):
        return 'DiscreteDist(atoms=%d)' % len(self._mass)


def entropy(d, base=None):
    '''
    The Shannon entropy :math:`-\\sum_x P(x) \\log P(x)`.

    Each term is evaluated as :math:`w(\\log b - \\log a)` for
    :math:`w = a/b`, so arbitrarily large numerators and denominators are
    fine.

    Args:
        d (DiscreteDist): The distribution.
        base (float): Logarithm base.  Natural logarithm when `None`.

    Returns:
        float: The entropy.
    '''
    terms = []
    for w in d.weights:
        if w == 1:
            continue
        lw = math.log(w.numerator) - math.log(w.denominator)
        terms.append(-float(w) * lw)
    h = math.fsum(terms)
    if base is not None:
        h /= math.log(base)
    return max(h, 0.0)


class JointRV(object):
    '''
    The joint law of a pair `(X, Y)`.

    Args:
        mass (dict): `(x, y)` to exact weight.
        ambient (str): `'Z'` (integers), `'Zn'` (integer vectors) or
            `'Fp'` (vectors of :math:`\\mathbf{F}_p^n`).
        p (int): The prime for the `'Fp'` ambient.
        n (int): The vector length for `'Zn'` and `'Fp'`.
    '''
    def __init__(self, mass, ambient='Z', p=None, n=None):
        assert ambient in AMBIENTS, 'ambient must be one of %s' % (AMBIENTS,)
        self.ambient = ambient
        self.p = fp.check_prime(p) if ambient == 'Fp' else None
        self.n = n if ambient != 'Z' else 1
        merged = collections.defaultdict(fractions.Fraction)
        for (x, y), w in mass.items():
            merged[(self._coerce(x), self._coerce(y))] += fractions.Fraction(w)
        self._dist = DiscreteDist(merged)

    def _coerce(self, v):
        if self.ambient == 'Z':
            return int(v)
        v = tuple(int(c) for c in v)
        if self.n is None:
            self.n = len(v)
        assert len(v) == self.n, 'vector %r does not have length %d' % (v, self.n)
        return fp.reduce(v, self.p) if self.ambient == 'Fp' else v

    @classmethod
    def uniform(cls, pairs, ambient='Z', p=None, n=None):
        pairs = set((x if ambient == 'Z' else tuple(x),
                     y if ambient == 'Z' else tuple(y)) for x, y in pairs)
        w = fractions.Fraction(1, len(pairs))
        return cls({xy: w for xy in pairs}, ambient, p, n)

    @classmethod
    def from_samples(cls, samples, ambient='Z', p=None, n=None):
        '''
        The empirical law of a list of `(x, y)` samples.
        '''
        samples = list(samples)
        counts = collections.Counter(
            (x if ambient == 'Z' else tuple(x), y if ambient == 'Z' else tuple(y))
            for x, y in samples)
        total = len(samples)
        return cls({xy: fractions.Fraction(c, total) for xy, c in counts.items()},
                   ambient, p, n)

    @property
    def mass(self):
        return self._dist.mass

    @property
    def atoms(self):
        return sorted(self._dist.mass.items())

    def marginal_x(self):
        m = collections.defaultdict(fractions.Fraction)
        for (x, _), w in self.mass.items():
            m[x] += w
        return DiscreteDist(m)

    def marginal_y(self):
        m = collections.defaultdict(fractions.Fraction)
        for (_, y), w in self.mass.items():
            m[y] += w
        return DiscreteDist(m)

    def to_dict(self):
        d = {'ambient': self.ambient,
             'atoms': [[x, y, '%d/%d' % (w.numerator, w.denominator)]
                       for (x, y), w in self.atoms]}
        if self.p is not None:
            d['p'] = self.p
        if self.n is not None and self.ambient != 'Z':
            d['n'] = self.n
        return d

    def __len__(self):
        return len(self._dist)

    def __repr__(self):
        return 'JointRV(ambient=%r, atoms=%d)' % (self.ambient, len(self))


def fp_residue(r, p):
    '''
    Reads a slope as an element of :math:`\\mathbf{F}_p`, or `None` for
    infinity.
    '''
    r = sb.Slope(r)
    if r.is_infinite:
        return None
    if r.denominator % p == 0:
        raise exc.PreconditionError('slope %s is not defined mod %d' % (r, p), slope=r)
    return (r.numerator * pow(r.denominator, -1, p)) % p


def rv_projection(J, r):
    '''
    The law of :math:`X + rY` (of `Y` when `r` is infinite).

    Args:
        J (JointRV): The joint law.
        r (Slope): The slope; read mod `p` in the `'Fp'` ambient.

    Returns:
        DiscreteDist: The exact pushforward.
    '''
    L = _lcm_denominator(J.mass.values())
    acc = collections.defaultdict(int)
    if J.ambient == 'Fp':
        p = J.p
        rr = fp_residue(r, p)
        for (x, y), w in J.mass.items():
            v = y if rr is None else fp.add(x, fp.scale(rr, y, p), p)
            acc[v] += w.numerator * (L // w.denominator)
    else:
        r = sb.Slope(r)
        for (x, y), w in J.mass.items():
            if r.is_infinite:
                v = y
            elif J.ambient == 'Z':
                v = sb.exact(x + r.value * y)
            else:
                v = tuple(sb.exact(xi + r.value * yi) for xi, yi in zip(x, y))
            acc[v] += w.numerator * (L // w.denominator)
    return DiscreteDist({v: fractions.Fraction(c, L) for v, c in acc.items()})


def difference(J):
    return rv_projection(J, -1)


def projection_entropy(J, r, base=None):
    return entropy(rv_projection(J, r), base=base)


def entropy_gap(J, slopes, base=None):
    '''
    :math:`H(X - Y) / \\sup_j H(X + r_j Y)`.

    Args:
        J (JointRV): The joint law.
        slopes (list): Slopes other than -1.

    Returns:
        tuple: The ratio and the first maximizing slope.  The ratio is
        `inf` when every projection entropy vanishes but
        :math:`H(X - Y)` does not.
    '''
    slopes = [sb.Slope(r) for r in slopes]
    assert slopes, 'At least one slope is needed.'
    if J.ambient == 'Fp':
        if any(r is not None and r == J.p - 1 for r in (fp_residue(s, J.p) for s in slopes)):
            raise ValueError('slope -1 is excluded')
    elif sb.Slope(-1) in slopes:
        raise ValueError('slope -1 is excluded')
    h_diff = entropy(difference(J))
    best, best_r = -1.0, None
    for r in slopes:
        h = entropy(rv_projection(J, r))
        if h > best:
            best, best_r = h, r
    if best == 0.0:
        ratio = math.inf if h_diff > 0 else 0.0
    else:
        ratio = h_diff / best
    return ratio, best_r


def fp_slopes(p, exclude_minus_one=True):
    '''
    :math:`\\mathbf{F}_p \\cup \\{\\infty\\}` as slopes.
    '''
    out = [sb.Slope(r) for r in range(p) if not (exclude_minus_one and r == p - 1)]
    return out + [sb.INFINITY]


def mt_joint(p, cap=config.CAP_ENUM):
    '''
    The law of :math:`X = (a + b, ab)`, :math:`Y = (a + b', ab')` with
    `a`, `b`, `b'` independent and uniform on :math:`\\mathbf{F}_p`.

    :math:`H(X - Y) = (2 - 1/p)\\log p`, while every :math:`X + rY`,
    :math:`r \\ne -1`, is a dilate of the uniform point of the
    Mockenhaupt-Tao set and has entropy
    :func:`mt_projection_entropy`.

    Args:
        p (int): A prime.
        cap (int): Largest allowed :math:`p^3`.

    Returns:
        JointRV: The law over :math:`\\mathbf{F}_p^2`.
    '''
    p = fp.check_prime(p)
    if p**3 > cap:
        raise exc.InstanceTooLarge('p^3', p**3, cap)
    w = fractions.Fraction(1, p**3)
    mass = collections.defaultdict(fractions.Fraction)
    for a in range(p):
        for b in range(p):
            x = ((a + b) % p, (a * b) % p)
            for b2 in range(p):
                mass[(x, ((a + b2) % p, (a * b2) % p))] += w
    return JointRV(mass, 'Fp', p, 2)


def mt_difference_entropy(p):
    return (2 - 1 / p) * math.log(p)


def mt_projection_entropy(p):
    '''
    :math:`2\\log p - (1 - 1/p)\\log 2`, the entropy of every
    :math:`X + rY`, :math:`r \\ne -1`, in :func:`mt_joint`.
    '''
    return 2 * math.log(p) - (1 - 1 / p) * math.log(2)


def mt_projection_bound(p):
    return 2 * math.log(p) - math.log(2) + 5 * math.log(p) / p


@dataclasses.dataclass
class TypicalCount(sb.Record):
    n: int
    logcount: float
    entropy: float
    gap: float
    stirling_bound: float


def multinomial_logcount(dist, n):
    '''
    :math:`\\frac{1}{n}\\log \\frac{n!}{\\prod_z (n p_z)!}`.
    '''
    counts = []
    for w in dist.weights:
        c = w * n
        if c.denominator != 1:
            raise exc.PreconditionError(
                'n p_z = %s is not an integer for n = %d' % (c, n), n=n)
        counts.append(c.numerator)
    counts = np.array(counts, dtype=float)
    return float((gammaln(n + 1) - np.sum(gammaln(counts + 1))) / n)


def typical_logcount(J, r, n):
    '''
    Compares the normalized log-size of the typical set of
    :math:`X + rY` with :math:`H(X + rY)`.

    Args:
        J (JointRV or DiscreteDist): The law.  A :class:`DiscreteDist`
            is used as it is and `r` is ignored.
        r (Slope): The slope.
        n (int): The sequence length; every :math:`n p_z` must be an
            integer.

    Returns:
        TypicalCount: The log-count, the entropy, their difference and
        the bound :math:`\\#\\mathrm{supp} \\cdot \\log(n+1)/n` on it.
    '''
    dist = J if isinstance(J, DiscreteDist) else rv_projection(J, r)
    lc = multinomial_logcount(dist, n)
    h = entropy(dist)
    return TypicalCount(n, lc, h, h - lc, len(dist) * math.log(n + 1) / n)


def _slope_ratio(r):
    return r.value / (1 + r.value)


def minimal_Q(slopes):
    Q = 1
    for r in slopes:
        if not r.is_infinite:
            den = _slope_ratio(r).denominator
            Q = Q * den // math.gcd(Q, den)
    return Q


def minimal_M(slopes):
    M = 1
    for r in slopes:
        if r.is_infinite:
            M = max(M, 2)
        else:
            M = max(M, math.floor(abs(_slope_ratio(r))) + 1)
    return M


def cover_to_rv(A, N, slopes, Q, M, certificate=None):
    '''
    The random pair :math:`X = a(d) + MQd`, :math:`Y = a(d) + (M+1)Qd`
    for `d` uniform on :math:`\\{1, \\ldots, N\\}`, built from a cover
    by progressions of length :math:`k = 2MQ`.

    :math:`X - Y` is uniform on :math:`\\{-Q, \\ldots, -NQ\\}`, and
    :math:`X + rY = (1 + r)(a(d) + (MQ + Qr/(1+r))d)` lies in
    :math:`(1 + r)A` as long as :math:`Qr/(1+r)` is an integer of size
    below `QM`.

    Args:
        A (IntSet): The cover.
        N (int): Number of differences.
        slopes (list): The slopes; -1 is not allowed.
        Q (int): Denominator clearing parameter.
        M (int): Magnitude parameter.
        certificate (APCertificate): Progressions of length `2MQ` over
            :math:`\\{1, \\ldots, N\\}`.  Computed when omitted.

    Returns:
        JointRV: The law of `(X, Y)`.
    '''
    slopes = [sb.Slope(r) for r in slopes]
    k = 2 * M * Q
    for r in slopes:
        if r == -1:
            raise exc.PreconditionError('slope -1 is not allowed', slope=r)
    min_Q, min_M = minimal_Q(slopes), minimal_M(slopes)
    for r in slopes:
        if r.is_infinite:
            if (M + 1) * Q > k - 1:
                raise exc.PreconditionError(
                    'slope inf needs (M+1)Q <= k-1; use M >= %d' % min_M,
                    slope=r, min_Q=min_Q, min_M=min_M)
            continue
        q = Q * _slope_ratio(r)
        if q.denominator != 1:
            raise exc.PreconditionError(
                'Q r/(1+r) = %s is not an integer for r = %s; use Q = %d'
                % (q, r, min_Q), slope=r, min_Q=min_Q, min_M=min_M)
        if abs(q) >= Q * M:
            raise exc.PreconditionError(
                '|Q r/(1+r)| = %s is not below QM = %d for r = %s; use M >= %d'
                % (abs(q), Q * M, r, min_M), slope=r, min_Q=min_Q, min_M=min_M)

    A = sb.IntSet(A)
    if certificate is None:
        certificate = sp.verify_cover(A, k, range(1, N + 1))
    if not certificate.ok:
        raise exc.PreconditionError(
            'A misses %d-term progressions for %r' % (k, certificate.uncovered),
            uncovered=certificate.uncovered)
    bad = certificate.invalid_differences(A)
    if bad:
        raise exc.PreconditionError('certificate is invalid for %r' % (bad,),
                                    uncovered=bad)

    w = fractions.Fraction(1, N)
    mass = {}
    for d in range(1, N + 1):
        a = certificate[d]
        mass[(a + M * Q * d, a + (M + 1) * Q * d)] = w
    J = JointRV(mass, 'Z')

    diff = difference(J)
    if len(diff) != N or set(diff.mass.values()) != {w} \
            or set(diff.support) != {-Q * d for d in range(1, N + 1)}:
        raise exc.ConstructionError('X - Y is not uniform on {-Q,...,-NQ}')
    for r in slopes:
        law = rv_projection(J, r)
        target = A if r.is_infinite else {sb.exact((1 + r.value) * a) for a in A}
        if not all(v in target for v in law.support):
            raise exc.ConstructionError('X + %sY leaves (1 + r)A' % r)
    logger.debug('cover_to_rv: k=%d N=%d slopes=%s', k, N, [str(r) for r in slopes])
    return J


def katz_tao_polynomial(alpha):
    return alpha**3 - 4 * alpha + 2


def katz_tao_epsilon():
    '''
    :math:`\\alpha - 1` for the root :math:`\\alpha \\in (1, 2)` of
    :math:`\\alpha^3 - 4\\alpha + 2`, about 0.67513.
    '''
    alpha = scipy.optimize.bisect(katz_tao_polynomial, 1.0, 2.0, xtol=1e-12)
    return alpha - 1
