"""
Projections of planar sets, tensor powers and progression covers over
the integers.
"""
import fractions
import itertools
import logging

from . import config
from . import exceptions as exc
from . import sets_base as sb

logger = logging.getLogger(__name__)


def _points(A):
    if isinstance(A, (sb.PlanarSet, sb.PairSetN)):
        return A.points
    return A


def project(A, r):
    '''
    The projection :math:`\\pi_r(A) = \\{x + ry : (x, y) \\in A\\}`.

    Args:
        A (PlanarSet): The planar set.
        r (Slope): The slope.  `INFINITY` selects the second
            coordinate.

    Returns:
        frozenset: The exact image.  Values are `int` whenever they are
        integral, otherwise `Fraction`.
    '''
    r = sb.Slope(r)
    pts = _points(A)
    if r.is_infinite:
        return frozenset(y for _, y in pts)
    if r.is_integral:
        ri = r.numerator
        return frozenset(x + ri * y for x, y in pts)
    rv = r.value
    return frozenset(sb.exact(x + rv * y) for x, y in pts)


def project_n(B, r):
    '''
    The coordinatewise projection :math:`\\pi_r^{(n)}` of a set of
    pairs of `n`-vectors.

    Args:
        B (PairSetN): The pair set.
        r (Slope): The slope.

    Returns:
        frozenset: Tuples of exact values.
    '''
    r = sb.Slope(r)
    pts = _points(B)
    if r.is_infinite:
        return frozenset(y for _, y in pts)
    rv = r.value
    return frozenset(
        tuple(sb.exact(xi + rv * yi) for xi, yi in zip(x, y))
        for x, y in pts)


def tensor_power(A, n, cap=config.CAP_ENUM):
    '''
    The `n`-fold coordinatewise power :math:`A^{(n)}` of a planar set.

    A point of the power is a choice of `n` points of `A`; its
    x-vector collects their first coordinates and its y-vector their
    second coordinates.  For every slope the projection count of the
    power is :math:`(\\#\\pi_r(A))^n`.

    Args:
        A (PlanarSet): A nonempty planar set.
        n (int): The power, at least 1.
        cap (int): Refuse to build more than `cap` points.

    Returns:
        PairSetN: The power.
    '''
    pts = sorted(_points(A))
    assert pts, 'Cannot take a power of the empty set.'
    assert n >= 1, 'The power must be positive.'
    size = len(pts) ** n
    if size > cap:
        raise exc.InstanceTooLarge('#A^n', size, cap)
    out = []
    for combo in itertools.product(pts, repeat=n):
        out.append((tuple(x for x, _ in combo), tuple(y for _, y in combo)))
    return sb.PairSetN(n, out)


def collapse_to_plane(B, slopes):
    '''
    Collapses a pair set in :math:`\\mathbf{Z}^n \\times \\mathbf{Z}^n`
    to the plane with :math:`\\psi_t(x, y) = (w \\cdot x, w \\cdot y)`,
    :math:`w = (t, t^2, \\ldots, t^n)`.

    Candidates `t = 1, 2, ...` are tried in order and the first one
    preserving every requested projection count is returned.

    Args:
        B (PairSetN): The pair set.
        slopes (list): The slopes whose counts must be preserved.

    Returns:
        tuple: The collapsed :class:`PlanarSet` and `t`.
    '''
    slopes = [sb.Slope(r) for r in slopes]
    targets = [len(project_n(B, r)) for r in slopes]
    n = B.n
    t = 1
    while True:
        w = [t**i for i in range(1, n + 1)]
        image = sb.PlanarSet(
            (sum(wi * xi for wi, xi in zip(w, x)),
             sum(wi * yi for wi, yi in zip(w, y)))
            for x, y in B.points)
        if all(len(project(image, r)) == c for r, c in zip(slopes, targets)):
            logger.debug('collapse_to_plane: n=%d accepted t=%d', n, t)
            return image, t
        t += 1


def verify_cover(A, k, D):
    '''
    Looks for a `k`-term progression of every difference in `D`.

    For each difference the smallest admissible base point is chosen.
    The difference 0 is covered by any nonempty set.

    Args:
        A (IntSet): The set.
        k (int): Progression length, at least 1.
        D (iterable): The differences.

    Returns:
        APCertificate or CoverFailure: The certificate when every
        difference is covered, otherwise the list of uncovered ones.
    '''
    assert k >= 1, 'Progression length must be at least 1.'
    if not isinstance(A, sb.IntSet):
        A = sb.IntSet(A)
    entries = {}
    uncovered = []
    for d in sorted(set(D)):
        found = None
        if d == 0:
            if len(A):
                found = A.min
        else:
            for a in A:
                if all(a + j * d in A for j in range(1, k)):
                    found = a
                    break
        if found is None:
            uncovered.append(d)
        else:
            entries[d] = found
    if uncovered:
        return sb.CoverFailure(k, uncovered)
    return sb.APCertificate(k, entries)


def covers_interval(A, k, N):
    return verify_cover(A, k, range(1, N + 1)).ok


def cut_and_move(A, k, N):
    '''
    Confines a cover of :math:`\\{1, \\ldots, N\\}` to the window
    :math:`\\{1, \\ldots, 10kN\\}`.

    `Z` is cut into the blocks :math:`I_j = 10kjN + \\{1, \\ldots,
    10kN\\}` and each block is translated back onto :math:`I_0`.  A
    progression of difference at most `N` meets at most two blocks, so
    one of its pieces keeps :math:`\\lfloor k/2 \\rfloor` terms.

    Args:
        A (IntSet): A set with a `k`-term progression of every
            difference in :math:`\\{1, \\ldots, N\\}`.
        k (int): Progression length.
        N (int): Number of differences.

    Returns:
        IntSet: The moved set.
    '''
    cert = verify_cover(A, k, range(1, N + 1))
    if not cert.ok:
        raise exc.PreconditionError(
            'input does not cover every difference in 1..%d with %d-term '
            'progressions' % (N, k), uncovered=cert.uncovered)
    L = 10 * k * N
    A2 = sb.IntSet(a - L * ((a - 1) // L) for a in A)
    if k // 2 >= 1:
        check = verify_cover(A2, k // 2, range(1, N + 1))
        if not check.ok:
            raise exc.ConstructionError(
                'cut_and_move lost differences %r' % (check.uncovered,))
    logger.debug('cut_and_move: %d -> %d points in a window of %d',
                 len(A), len(A2), L)
    return A2


def minimal_freiman_base(k, B, n):
    return 10 * k * B * n


def freiman_collapse(points, B, k, base=None):
    '''
    Maps integer vectors with coordinates in :math:`\\{0, \\ldots,
    B-1\\}` to integers by :math:`f(x) = \\sum_i b^{i-1} x_i`.

    `f` is linear, so it maps progressions to progressions, and it is
    injective on the box whenever :math:`b \\geq B`.

    Args:
        points (iterable): The vectors, all of the same length.
        B (int): The box bound.
        k (int): The progression length the caller needs preserved.
            Only used for the default base.
        base (int): The base `b`.  Defaults to :math:`10kBn`.

    Returns:
        IntSet: The image, of the same size as the input.
    '''
    pts = [tuple(int(c) for c in v) for v in points]
    n = len(pts[0]) if pts else 1
    for v in pts:
        assert len(v) == n, 'All vectors must have the same length.'
        if any(c < 0 or c >= B for c in v):
            raise exc.PreconditionError(
                'vector %r leaves the box {0,...,%d}^%d' % (v, B - 1, n),
                vector=v)
    if base is None:
        base = minimal_freiman_base(k, B, n)
    if base < B:
        raise exc.BaseTooSmall(base, B)
    weights = [base**i for i in range(n)]
    image = sb.IntSet(sum(w * c for w, c in zip(weights, v)) for v in pts)
    if len(image) != len(set(pts)):
        raise exc.ConstructionError('freiman_collapse is not injective')
    return image


def difference_progression_set(B, k):
    '''
    The union :math:`S = \\bigcup_{0 \\le i < k} \\frac{k-i}{k}
    \\pi_{i/(k-i)}(B)`.

    For every pair :math:`(x, y) \\in B`, `S` contains the points
    :math:`x + i(y - x)/k`, so after multiplying by `k` it contains a
    `k`-term progression of difference :math:`y - x`.  Its size is at
    most `k` times the largest projection.

    Args:
        B (PlanarSet): The planar set.
        k (int): Progression length, at least 1.

    Returns:
        tuple: The rational set `S`, the integer set `kS` and an
        :class:`APCertificate` for `kS` over the differences
        :math:`-\\pi_{-1}(B)`.
    '''
    assert k >= 1, 'Progression length must be at least 1.'
    S = set()
    for i in range(k):
        scale = fractions.Fraction(k - i, k)
        S.update(sb.exact(scale * v)
                 for v in project(B, fractions.Fraction(i, k - i)))
    scaled = sb.IntSet(sb.exact(k * s) for s in S)
    entries = {}
    for x, y in sorted(_points(B)):
        d = y - x
        if d not in entries:
            entries[d] = k * x
    cert = sb.APCertificate(k, entries)
    bad = cert.invalid_differences(scaled)
    if bad:
        raise exc.ConstructionError(
            'difference_progression_set misses differences %r' % (bad,))
    return frozenset(S), scaled, cert


def height_slopes(k):
    '''
    The slopes :math:`a/b` with :math:`|a|, |b| \\le k`, and infinity.
    '''
    values = set()
    for b in range(1, k + 1):
        for a in range(-k, k + 1):
            values.add(fractions.Fraction(a, b))
    return [sb.Slope(v) for v in sorted(values)] + [sb.INFINITY]
