"""
Desk-scale replay of the entropy-to-Besicovitch pipeline over
:math:`\\mathbf{F}_p`: a joint law, its typical pair set, the union of
lines through the pairs, a random linear compression and the extension
to every direction, with the exact size of every stage.
"""
import fractions
import functools
import itertools
import logging
import math

from sympy.utilities.iterables import multiset_permutations

from . import compression
from . import config
from . import covering
from . import entropy as ent
from . import exceptions as exc
from . import _fp_lib as fp

logger = logging.getLogger(__name__)

MODES = ('typical', 'support')


def multinomial(counts):
    counts = list(counts)
    out = math.factorial(sum(counts))
    for c in counts:
        out //= math.factorial(c)
    return out


def law_denominator(J):
    return functools.reduce(math.lcm, (w.denominator for w in J.mass.values()), 1)


def _check_fp(J):
    if J.ambient != 'Fp':
        raise exc.PreconditionError('the pipeline needs a law over F_p^n, got %r'
                                    % J.ambient)


def _concat(vectors):
    return tuple(c for v in vectors for c in v)


def typical_pair_set(J, m, cap=config.CAP_ENUM):
    '''
    The pairs of sequences of length :math:`L = mq` whose empirical law
    is exactly `J`, realized in
    :math:`\\mathbf{F}_p^{nL} \\times \\mathbf{F}_p^{nL}`.

    Here `q` is the common denominator of the masses of `J`, so every
    atom `z` occurs exactly :math:`L\\,P(z)` times and
    :math:`\\#B = L! / \\prod_z (L P(z))!`.

    Args:
        J (JointRV): A law over :math:`\\mathbf{F}_p^n`.
        m (int): Number of periods of length `q`.
        cap (int): Largest allowed :math:`\\#B`.

    Returns:
        FpPairSet: The pair set `B`.
    '''
    _check_fp(J)
    assert m >= 1, 'm must be positive.'
    L = m * law_denominator(J)
    atoms = [xy for xy, _ in J.atoms]
    counts = [int(w * L) for _, w in J.atoms]
    size = multinomial(counts)
    if size > cap:
        raise exc.InstanceTooLarge('#B', size, cap)
    labels = [i for i, c in enumerate(counts) for _ in range(c)]
    pairs = []
    for seq in multiset_permutations(labels):
        pairs.append((_concat(atoms[i][0] for i in seq),
                      _concat(atoms[i][1] for i in seq)))
    logger.debug('typical_pair_set: L=%d #B=%d', L, len(pairs))
    return fp.FpPairSet(J.p, J.n * L, pairs)


def support_pair_set(J, m, cap=config.CAP_ENUM):
    '''
    The `m`-fold power of the support of `J`.  Every projection has
    exactly :math:`(\\#\\pi_r(\\mathrm{supp}\\,J))^m` elements.
    '''
    _check_fp(J)
    assert m >= 1, 'm must be positive.'
    atoms = [xy for xy, _ in J.atoms]
    size = len(atoms)**m
    if size > cap:
        raise exc.InstanceTooLarge('#B', size, cap)
    pairs = [(_concat(x for x, _ in combo), _concat(y for _, y in combo))
             for combo in itertools.product(atoms, repeat=m)]
    return fp.FpPairSet(J.p, J.n * m, pairs)


def expected_projection_size(J, r, m, mode='typical'):
    '''
    :math:`\\#\\pi_r(B)` predicted from the law of :math:`X + rY`.
    '''
    dist = ent.rv_projection(J, r)
    if mode == 'support':
        return len(dist)**m
    L = m * law_denominator(J)
    return multinomial(int(w * L) for w in dist.weights)


def _slopes(p):
    return [r for r in range(p) if r != p - 1] + [None]


def lines_union(B):
    '''
    The union of the lines through the pairs of `B`.

    A pair :math:`(x, y)` with :math:`x \\ne y` contributes the line
    through `x` and `y`, whose points are :math:`(x + ry)/(1 + r)` for
    :math:`r \\ne -1` and `y`; a diagonal pair contributes the point `x`
    alone.  Hence :math:`\\#A \\le p \\sup_{r \\ne -1} \\#\\pi_r(B)`,
    which is checked.

    Args:
        B (FpPairSet): The pairs.

    Returns:
        tuple: The set `A` (:class:`FpSet`) and the direction set
        :math:`\\pi_{-1}(B) \\setminus \\{0\\}`.
    '''
    p, M = B.p, B.n
    points = set()
    directions = set()
    for x, y in B:
        if x == y:
            points.add(x)
            continue
        d = fp.sub(x, y, p)
        directions.add(d)
        points.update(fp.line(y, d, p))
    A = fp.FpSet(p, M, points)
    sup = max(len(B.project(r)) for r in _slopes(p)) if len(B) else 0
    if len(A) > p * sup:
        raise exc.ConstructionError('#A = %d exceeds p sup #pi_r(B) = %d'
                                    % (len(A), p * sup))
    return A, frozenset(directions)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except exc.KakeyaLabError as e:
        raise exc.StageFailed(name, e) from e


def replay_theorem13(p, J='mt', m=1, mode=None, seed=0,
                     max_dim=config.PIPELINE_MAX_DIM, cap=config.CAP_ENUM,
                     retries=config.RETRIES):
    '''
    Runs the pipeline on one law and reports every stage.

    Args:
        p (int): A prime.
        J (JointRV or str): The law, or `'mt'` for
            :func:`kakeyalabpy.entropy.mt_joint`.
        m (int): Sequence-length knob of the pair-set stage.
        mode (str): `'typical'` (exact typical set) or `'support'`
            (power of the support).  Defaults to `'support'` for `'mt'`,
            whose typical set is beyond desk scale, and `'typical'`
            otherwise.
        seed (int): Seed of the linear compression.
        max_dim (int): Largest ambient dimension of the pair set.
        cap (int): Enumeration cap.
        retries (int): Matrices tried by the compression.

    Returns:
        dict: The report.  `final` describes the extended set: its
        dimension, size, the :math:`(p/2)^n` reference and whether it
        holds a full line in every direction.
    '''
    p = fp.check_prime(p)
    if isinstance(J, str):
        assert J == 'mt', 'unknown preset %r' % J
        J = _stage('law', ent.mt_joint, p, cap=cap)
        mode = mode or 'support'
    mode = mode or 'typical'
    assert mode in MODES, 'mode must be one of %s' % (MODES,)
    _check_fp(J)
    if J.p != p:
        raise exc.PreconditionError('law is over F_%d, not F_%d' % (J.p, p))

    q = law_denominator(J)
    dim = J.n * m * (q if mode == 'typical' else 1)
    if dim > max_dim:
        raise exc.InstanceTooLarge('ambient dimension', dim, max_dim)
    if p**dim > cap:
        raise exc.InstanceTooLarge('p^dimension', p**dim, cap)

    slopes = ent.fp_slopes(p)
    h_diff = ent.entropy(ent.difference(J))
    ratio, best_r = ent.entropy_gap(J, slopes)
    report = {'p': p, 'm': m, 'mode': mode, 'seed': seed,
              'law': {'atoms': len(J), 'n': J.n, 'q': q},
              'entropy': {'difference': h_diff,
                          'sup_projection': ent.projection_entropy(J, best_r),
                          'gap_ratio': ratio, 'gap_slope': best_r}}

    build = typical_pair_set if mode == 'typical' else support_pair_set
    B = _stage('pairs', build, J, m, cap=cap)
    sizes = {}
    for r in slopes + [fractions.Fraction(-1)]:
        rr = ent.fp_residue(r, p)
        got = len(B.project(rr))
        want = expected_projection_size(J, r, m, mode)
        if got != want:
            raise exc.StageFailed('pairs', exc.ConstructionError(
                '#pi_%s(B) = %d, expected %d' % (r, got, want)))
        sizes[str(r)] = got
    report['pairs'] = {'dimension': B.n, 'size': len(B), 'projections': sizes}

    A, D = _stage('lines', lines_union, B)
    report['lines'] = {'size': len(A), 'directions': len(D)}

    if not D:
        logger.info('replay_theorem13: no off-diagonal pair, nothing to compress')
        report['compress'] = None
        report['extend'] = None
        report['final'] = {'n': A.n, 'size': len(A), 'reference': (p / 2)**A.n,
                           'besicovitch': False, 'above_reference': False,
                           'degenerate': True}
        report['ok'] = True
        return report

    comp = _stage('compress', compression.random_linear_compress, A, D,
                  seed=seed, retries=retries)
    report['compress'] = {'n': comp.n, 'size': len(comp.A),
                          'directions': comp.count, 'attempts': comp.attempts,
                          'matrix': comp.matrix}

    ext = _stage('extend', covering.extend_full_difference_cover,
                 comp.A, comp.directions, p)
    report['extend'] = {'size': len(ext.A), 'translates': ext.T}

    n = comp.n
    final = ext.A
    check = fp.verify_fp_cover(final, p, fp.nonzero_vectors(p, n))
    reference = (p / 2)**n
    report['final'] = {
        'n': n, 'size': len(final), 'reference': reference,
        'besicovitch': check.ok, 'above_reference': len(final) >= reference,
        'size_exponent': math.log(len(final)) / (n * math.log(p)),
        'reference_exponent': 1 - math.log(2) / math.log(p),
        'degenerate': False}
    report['ok'] = check.ok and len(final) >= reference
    logger.info('replay_theorem13: p=%d m=%d #B=%d #A=%d -> n=%d #final=%d',
                p, m, len(B), len(A), n, len(final))
    return report


def replay_sweep(p, J='mt', ms=(1, 2), **kwargs):
    '''
    Runs :func:`replay_theorem13` for several `m` and collects how the
    final size exponent moves with `m`.
    '''
    rows = []
    for m in ms:
        r = replay_theorem13(p, J, m=m, **kwargs)
        f = r['final']
        rows.append({'m': m, 'n': f['n'], 'size': f['size'],
                     'size_exponent': f.get('size_exponent'),
                     'gap_ratio': r['entropy']['gap_ratio'], 'ok': r['ok']})
    return rows
