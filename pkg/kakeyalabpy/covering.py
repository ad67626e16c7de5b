"""
Greedy covers by translates, over the integers and over
:math:`\\mathbf{F}_p^n`, and the extension of a partial progression
cover of :math:`\\mathbf{F}_p^n` to every nonzero direction.
"""
import dataclasses
import logging
import math

import numpy as np

from . import exceptions as exc
from . import sets_base as sb
from . import _fp_lib as fp

logger = logging.getLogger(__name__)


def int_cover_bound(X, size):
    return math.ceil((2 * X / size) * math.log(X)) + 1


def fp_cover_bound(p, n, size):
    return math.ceil((p**n / size) * n * math.log(p)) * 2 + 1


def greedy_translate_cover_int(S, X, return_history=False):
    '''
    Greedily picks translates `T` with :math:`S + T \\supseteq \\{1,
    \\ldots, X\\}`.

    Each step takes the translate covering the most uncovered points,
    the smallest one on ties.  The uncovered count contracts by at
    least a factor :math:`1 - \\#S/2X` per step, which is checked, so
    :math:`\\#T \\le \\lceil (2X/\\#S) \\log X \\rceil + 1`.

    Args:
        S (IntSet): A nonempty subset of :math:`\\{1, \\ldots, X\\}`.
        X (int): The target length.
        return_history (bool): Also return the uncovered count before
            each step.  Default is `False`.

    Returns:
        IntSet: The translates (and the history list if asked for).
    '''
    S = sb.IntSet(S)
    if not len(S):
        raise exc.PreconditionError('cannot cover with the empty set')
    if S.min < 1 or S.max > X:
        raise exc.PreconditionError('S must lie in {1,...,%d}' % X)

    s = np.zeros(X, dtype=np.int64)
    s[[e - 1 for e in S]] = 1
    uncovered = np.ones(X, dtype=np.int64)
    T = []
    history = [X]
    remaining = X
    while remaining:
        gains = np.correlate(uncovered, s, 'full')
        idx = int(np.argmax(gains))
        t = idx - (X - 1)
        lo, hi = max(1, S.min + t), min(X, S.max + t)
        for e in S:
            if lo <= e + t <= hi:
                uncovered[e + t - 1] = 0
        after = int(uncovered.sum())
        if 2 * X * after > remaining * (2 * X - len(S)):
            raise exc.ConstructionError(
                'greedy step contracted %d -> %d, above the lemma bound'
                % (remaining, after))
        T.append(t)
        remaining = after
        history.append(remaining)

    bound = int_cover_bound(X, len(S))
    if len(T) > bound:
        raise exc.ConstructionError('#T = %d above the bound %d' % (len(T), bound))
    logger.debug('greedy_translate_cover_int: X=%d #S=%d #T=%d', X, len(S), len(T))
    T = sb.IntSet(T)
    return (T, history) if return_history else T


def greedy_translate_cover_fp(S, target=None, return_history=False):
    '''
    Greedily picks translates `T` with :math:`S + T \\supseteq` `target`
    inside :math:`\\mathbf{F}_p^n`.

    Args:
        S (FpSet): A nonempty set.
        target (FpSet): What to cover.  Defaults to all of
            :math:`\\mathbf{F}_p^n`.
        return_history (bool): Also return the uncovered counts.

    Returns:
        FpSet: The translates, with
        :math:`\\#T \\le 2\\lceil (p^n/\\#S)\\, n \\log p \\rceil + 1`.
    '''
    if not len(S):
        raise exc.PreconditionError('cannot cover with the empty set')
    p, n = S.p, S.n
    size = p**n
    if target is None:
        uncovered = np.ones(size, dtype=bool)
    else:
        uncovered = target.mask.copy()

    V = np.array(list(fp.all_vectors(p, n)), dtype=np.int64).reshape(size, n)
    P = S.array()
    w = fp.weights(p, n)
    # row t: the indices of S + t
    shifted = ((V[:, None, :] + P[None, :, :]) % p) @ w

    T = []
    history = [int(uncovered.sum())]
    while uncovered.any():
        gains = uncovered[shifted].sum(axis=1)
        t = int(np.argmax(gains))
        uncovered[shifted[t]] = False
        T.append(fp.from_index(t, p, n))
        history.append(int(uncovered.sum()))

    bound = fp_cover_bound(p, n, len(S))
    if len(T) > bound:
        raise exc.ConstructionError('#T = %d above the bound %d' % (len(T), bound))
    T = fp.FpSet(p, n, T)
    return (T, history) if return_history else T


@dataclasses.dataclass
class ExtensionResult(sb.Record):
    A: fp.FpSet
    T: fp.FpSet
    certificate: sb.APCertificate


def extend_full_difference_cover(A, D, k, certificate=None):
    '''
    Extends a cover of the directions `D` to every nonzero direction.

    With `T` a greedy cover of :math:`\\mathbf{F}_p^n \\setminus \\{0\\}`
    by translates of `D`, the set
    :math:`A' = \\bigcup_{x \\in \\{0\\} \\cup T \\cup \\cdots \\cup
    (k-1)T} (A + x)` holds :math:`a + j(d + t)` whenever it holds
    :math:`a + jd`.

    Args:
        A (FpSet): The set.
        D (iterable): Directions covered by `A`.
        k (int): Progression length.
        certificate (APCertificate): Progressions of `A` over `D`.
            Computed when omitted.

    Returns:
        ExtensionResult: `A'`, `T` and a certificate of `A'` over all
        nonzero directions.
    '''
    p, n = A.p, A.n
    D = fp.FpSet(p, n, D)
    if certificate is None:
        certificate = fp.verify_fp_cover(A, k, D)
    if not certificate.ok:
        raise exc.PreconditionError(
            'A does not cover the directions %r' % (certificate.uncovered,),
            uncovered=certificate.uncovered)
    bad = certificate.invalid_differences(A)
    if bad:
        raise exc.PreconditionError(
            'certificate is invalid for %r' % (bad,), uncovered=bad)

    nonzero = fp.FpSet(p, n, fp.nonzero_vectors(p, n))
    T = greedy_translate_cover_fp(D, target=nonzero)
    shifts = {fp.scale(j, t, p) for t in T for j in range(k)}
    shifts.add(fp.zero(n))
    points = set()
    for x in shifts:
        points.update(fp.add(a, x, p) for a in A)
    A1 = fp.FpSet(p, n, points)

    if len(A1) > k * len(T) * len(A):
        raise exc.ConstructionError('#A\' exceeds k #T #A')
    cert = fp.verify_fp_cover(A1, k, nonzero)
    if not cert.ok:
        raise exc.ConstructionError(
            'extension misses directions %r' % (cert.uncovered,))
    logger.info('extend_full_difference_cover: #A=%d #D=%d #T=%d #A\'=%d',
                len(A), len(D), len(T), len(A1))
    return ExtensionResult(A1, T, cert)
