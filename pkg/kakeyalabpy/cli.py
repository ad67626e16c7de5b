"""
Command-line entry point, ``kakeyalab <subcommand> [flags]``.

Every report embeds the run configuration and the package version.
Wall-clock times only appear with ``--timing``, so identical flags give
identical output.

Exit status is 0 on success, 1 when a verified result fails its check
(uncovered differences, a failed bound) and 2 on an invalid
configuration.
"""
import argparse
import collections
import concurrent.futures
import dataclasses
import fractions
import json
import logging
import math
import re
import sys
import time

import numpy as np
import sympy
import tqdm

from . import __version__
from . import compression
from . import config
from . import constructions
from . import covering
from . import entropy as ent
from . import erdos_selfridge as es
from . import exceptions as exc
from . import oracle
from . import pipeline
from . import sets_base as sb
from . import sets_projections as sp
from . import _fp_lib as fp
from . import _io

logger = logging.getLogger(__name__)

FORMATS = ('json', 'csv', 'plain')
EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


@dataclasses.dataclass
class RunConfig:
    '''
    Everything needed to replay a run.

    Args:
        subcommand (str): The subcommand.
        params (dict): Its parameters.
        seed (int): Seed of every randomized step.
        caps (Caps): Search and enumeration caps.
        format (str): `'json'`, `'csv'` or `'plain'`.
        out (str): Output file, or `None` for stdout.
        threads (int): Worker threads for `table`.
        timing (bool): Include wall-clock times.
        progress (bool): Show progress bars on stderr.
    '''
    subcommand: str
    params: dict
    seed: int = 0
    caps: config.Caps = config.DEFAULT_CAPS
    format: str = 'json'
    out: str = None
    threads: int = 1
    timing: bool = False
    progress: bool = False

    def to_dict(self):
        return {'subcommand': self.subcommand, 'params': self.params,
                'seed': self.seed, 'caps': dataclasses.asdict(self.caps),
                'format': self.format, 'timing': self.timing}


def _int_list(text):
    '''
    `"2,3"` or `"1-4"` (or a mix, `"1-3,5"`) to a list of integers.
    '''
    out = []
    for part in str(text).split(','):
        part = part.strip()
        if not part:
            continue
        span = re.fullmatch(r'(-?\d+)-(-?\d+)', part)
        try:
            if span:
                out.extend(range(int(span.group(1)), int(span.group(2)) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError('not an integer list: %r' % text)
    if not out:
        raise argparse.ArgumentTypeError('empty list %r' % text)
    return out


def _slope_list(text):
    try:
        return [sb.Slope(s.strip()) for s in text.split(',') if s.strip()]
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(str(e))


def _base(cfg):
    return 2 if cfg.params.get('log2') else None


# subcommands ------------------------------------------------------------

def _construct(cfg):
    a = cfg.params
    if a.get('mt'):
        V = constructions.mockenhaupt_tao(a['p'])
        lines = fp.full_line_directions(V)
        report = {'p': a['p'], 'size': len(V), 'expected_size': a['p'] * (a['p'] + 1) // 2,
                  'full_line_directions': sorted(lines), 'set': V}
        ok = len(lines) == a['p']
    elif a.get('N') is not None:
        r = constructions.build_F_upper(a['k'], a['N'], a['m'], cap=cfg.caps.size)
        report = {'k': r.k, 'N': r.N, 'm': r.m, 'Q': r.Q, 'n': r.n, 'size': r.size,
                  'exponent': r.exponent, 'digit_exponent': r.digit_exponent,
                  'covers': r.certificate.ok, 'set': r.A}
        ok = r.certificate.ok
    else:
        C = constructions.quadratic_residue_cover(a['k'], a['m'], cap=cfg.caps.size)
        report = {'k': C.k, 'm': C.m, 'primes': C.primes, 'Q': C.Q, 'size': len(C.S),
                  'bound': C.bound, 'set': C.S}
        ok = True
        if a.get('n'):
            A, cert = constructions.digit_concatenate(C, a['n'], cap=cfg.caps.size)
            report['digits'] = {'n': a['n'], 'size': len(A), 'covers': cert.ok}
            ok = cert.ok
    return report, ok


def _oracle_result(cfg):
    a = cfg.params
    q = a['quantity']
    budget = cfg.caps.time_budget
    if q == 'F':
        return oracle.min_full_cover(a['k'], a['N'], cfg.caps.window, budget)
    if q in ("F'", 'Fprime'):
        return oracle.min_distinct_cover(a['k'], a['N'], a.get('max_difference'),
                                         cfg.caps.window, budget)
    return oracle.min_fp_cover(a['k'], a['n'], a['p'], time_budget=budget)


def _oracle_report(res, timing):
    report = {'quantity': res.quantity, 'params': res.params, 'optimum': res.optimum,
              'witness': res.witness, 'certificate': res.certificate,
              'exhausted': res.exhausted, 'lower_bound': res.lower_bound,
              'nodes': res.nodes}
    if res.reference is not None:
        report['reference'] = res.reference
    if timing:
        report['wall_time'] = res.wall_time
    return report


def _oracle(cfg):
    a = cfg.params
    if a.get('compare'):
        if a.get('p') is not None:
            r = oracle.compare_bounds(a['k'], p=a['p'], n=a['n'], window_cap=cfg.caps.window,
                                      time_budget=cfg.caps.time_budget)
        else:
            r = oracle.compare_bounds(a['k'], N=a['N'], window_cap=cfg.caps.window,
                                      time_budget=cfg.caps.time_budget)
        return r, r['ok']
    res = _oracle_result(cfg)
    if cfg.format == 'csv':
        header = oracle.CSV_HEADER + (['wall_time'] if cfg.timing else [])
        return {'_csv': (header, [res.csv_row(cfg.timing)])}, True
    return _oracle_report(res, cfg.timing), True


def _entropy(cfg):
    a = cfg.params
    base = _base(cfg)
    if a.get('katz_tao'):
        eps = ent.katz_tao_epsilon()
        return {'epsilon': eps, 'residual': abs(ent.katz_tao_polynomial(1 + eps))}, True
    if a.get('mt'):
        p = a['p']
        J = ent.mt_joint(p, cap=cfg.caps.enum)
        h_diff = ent.entropy(ent.difference(J), base)
        proj = {str(r): ent.projection_entropy(J, r, base) for r in ent.fp_slopes(p)}
        ratio, r = ent.entropy_gap(J, ent.fp_slopes(p))
        scale = 1 / math.log(base) if base else 1.0
        report = {'p': p, 'H(X-Y)': h_diff,
                  'H(X-Y) closed form': ent.mt_difference_entropy(p) * scale,
                  'H(X+rY)': proj,
                  'H(X+rY) closed form': ent.mt_projection_entropy(p) * scale,
                  'gap_ratio': ratio, 'gap_slope': r,
                  'projection_bound': ent.mt_projection_bound(p) * scale}
        ok = abs(h_diff - ent.mt_difference_entropy(p) * scale) <= 1e-9 \
            and max(proj.values()) <= ent.mt_projection_bound(p) * scale + 1e-9
        return report, ok

    slopes = a.get('slopes') or [sb.Slope(0), sb.INFINITY]
    Q = a.get('Q') or ent.minimal_Q(slopes)
    M = a.get('M') or ent.minimal_M(slopes)
    k = 2 * M * Q
    upper = constructions.build_F_upper(k, a['N'], a['m'], cap=cfg.caps.size)
    J = ent.cover_to_rv(upper.A, a['N'], slopes, Q, M, certificate=upper.certificate)
    h_diff = ent.entropy(ent.difference(J), base)
    proj = {str(r): ent.projection_entropy(J, r, base) for r in slopes}
    ratio, r = ent.entropy_gap(J, slopes)
    expected = math.log(a['N'], base) if base else math.log(a['N'])
    report = {'N': a['N'], 'k': k, 'Q': Q, 'M': M, 'cover_size': upper.size,
              'H(X-Y)': h_diff, 'log N': expected, 'H(X+rY)': proj,
              'gap_ratio': ratio, 'gap_slope': r, 'law': J}
    return report, abs(h_diff - expected) <= 1e-9


def _cover(cfg):
    a = cfg.params
    A = sb.IntSet(a['set'])
    if a.get('greedy'):
        T, history = covering.greedy_translate_cover_int(A, a['N'], return_history=True)
        return {'S': A, 'X': a['N'], 'T': T, 'uncovered': history,
                'bound': covering.int_cover_bound(a['N'], len(A))}, True
    D = a.get('differences') or range(1, a['N'] + 1)
    cert = sp.verify_cover(A, a['k'], D)
    report = {'k': a['k'], 'set': A, 'ok': cert.ok}
    report['certificate' if cert.ok else 'uncovered'] = \
        cert if cert.ok else cert.uncovered
    if cert.ok and a.get('cut_and_move'):
        moved = sp.cut_and_move(A, a['k'], a['N'])
        report['cut_and_move'] = {'set': moved, 'size': len(moved),
                                  'window': 10 * a['k'] * a['N']}
    return report, cert.ok


def _compress(cfg):
    a = cfg.params
    k, N = a['k'], a['N']
    if a.get('wrap'):
        upper = constructions.build_F_upper(k, N, a['m'], cap=cfg.caps.size)
        r = constructions.wrap_to_fp(upper.A, k, N, a['n'], p=a.get('p'), seed=cfg.seed,
                                     retries=cfg.caps.retries)
        return {'k': k, 'N': N, 'n': a['n'], 'p': r.p, 'M': r.M, 't': r.t,
                'size': len(r.A), 'directions': r.count, 'threshold': r.threshold,
                'attempts': r.attempts, 'progression_length': r.progression_length}, True
    Fp = oracle.min_distinct_cover(k, N, window_cap=cfg.caps.window,
                                   time_budget=cfg.caps.time_budget)
    A0 = Fp.witness.translate(1)
    cert0 = sp.verify_cover(A0, k, Fp.certificate.differences)
    r = compression.distinct_to_full(A0, cert0, k, N, seed=cfg.seed,
                                     retries=cfg.caps.retries)
    return {'k': k, 'N': N, 'A0': A0, 'theta': r.theta, 'attempts': r.attempts,
            'collisions': r.collisions, 'distinct': r.distinct, 'T': r.T,
            'size': len(r.A), 'bound': r.bound, 'covers': r.certificate.ok}, r.certificate.ok


def _es(cfg):
    a = cfg.params
    if a.get('min_only'):
        if not a.get('primes'):
            raise ValueError('--min-only needs --primes')
        r = es.min_over_intervals(a['primes'], a['k'], progress=cfg.progress,
                                  samples=config.ES_SAMPLES, seed=cfg.seed)
        return r.to_dict(), True
    r = es.sandwich_check(a['k'], a['N'], primes=a.get('primes'),
                          prime_bound=a['prime_bound'], X_max=a['x_max'],
                          window_cap=cfg.caps.window, progress=cfg.progress)
    return r, r['ok']


def _law(name, p):
    if name == 'mt':
        return 'mt'
    if name == 'uniform':
        return ent.JointRV.uniform([((x,), (y,)) for x in range(p) for y in range(p)],
                                   'Fp', p, 1)
    if name == 'point':
        return ent.JointRV({((0,), (0,)): 1}, 'Fp', p, 1)
    raise ValueError('unknown law %r' % name)


def _pipeline(cfg):
    a = cfg.params
    mode = a.get('mode') or ('support' if a['law'] == 'uniform' else None)
    r = pipeline.replay_theorem13(a['p'], _law(a['law'], a['p']), m=a['m'], mode=mode,
                                  seed=cfg.seed, cap=cfg.caps.enum,
                                  retries=cfg.caps.retries)
    return r, r['ok']


# check-all ----------------------------------------------------------------

def _check_oracles(caps):
    cases = [('F', 2, 3, 3), ('F', 3, 2, 4), ('F', 2, 6, 4), ("F'", 2, 3, 3)]
    cases += [('F', k, 1, k) for k in range(2, 7)]
    cases += [("F'", k, 1, k) for k in range(2, 7)]
    out = {}
    for q, k, N, want in cases:
        if q == 'F':
            got = oracle.min_full_cover(k, N, caps.window).optimum
        else:
            got = oracle.min_distinct_cover(k, N, window_cap=caps.window).optimum
        out['%s_%d(%d)' % (q, k, N)] = got == want
    for p in (2, 3, 5):
        out['f_%d,1(%d)' % (p, p)] = oracle.min_fp_cover(p, 1, p).optimum == p
    out['f_2,1(3)'] = oracle.min_fp_cover(2, 1, 3).optimum == 2
    return out


def _check_constructions(caps):
    out = {}
    for k in (2, 3):
        for m in (1, 2):
            C = constructions.quadratic_residue_cover(k, m, cap=caps.size)
            ok = sp.covers_interval(C.S, k, C.Q - 1) and len(C.S) <= C.bound
            n = 1
            while C.Q**(n + 1) <= 10**4:
                n += 1
            A, cert = constructions.digit_concatenate(C, n, cap=caps.size)
            out['qr(%d,%d)' % (k, m)] = ok and sp.covers_interval(A, k, C.Q**n - 1)
    for p in sympy.primerange(3, 32):
        p = int(p)
        V = constructions.mockenhaupt_tao(p)
        out['mt_set(%d)' % p] = len(fp.full_line_directions(V)) == p
    return out


def _random_certified_instance(rng, k_max=4, N_max=12):
    k = int(rng.integers(2, k_max + 1))
    N = int(rng.integers(1, N_max + 1))
    ds = sorted(int(d) for d in rng.choice(np.arange(1, 200), size=N, replace=False))
    starts = rng.integers(0, 50, size=N).tolist()
    A0 = sb.IntSet(a + j * d for a, d in zip(starts, ds) for j in range(k))
    return A0, sp.verify_cover(A0, k, ds), k, N


def _check_compression(seed, caps):
    out = {}
    rng = np.random.default_rng(seed)
    verified = within = True
    for i in range(200):
        A0, cert, k, N = _random_certified_instance(rng)
        try:
            r = compression.distinct_to_full(A0, cert, k, N, seed=seed + i,
                                             retries=caps.retries)
        except exc.RetryBudgetExhausted:
            within = False
            continue
        bound = compression.SIZE_CONSTANT * k**3 * (1 + math.log(N)) * len(A0)
        verified = verified and sp.covers_interval(r.A, k, N) and len(r.A) <= bound
        within = within and r.attempts <= config.RETRIES
    out['distinct_to_full'] = verified
    out['theta_accepted_within_budget'] = within

    ok = True
    for _ in range(10**4):
        N = int(rng.integers(1, 50))
        phi = compression.ThetaMap(fractions.Fraction(int(rng.integers(1, 10**6)), 10**6), N)
        x, y = (int(v) for v in rng.integers(-10**6, 10**6, size=2))
        ok = ok and phi(x + y) - phi(x) - phi(y) in (0, 1, -N, 1 - N)
    out['phi_theta_quasi_morphism'] = ok
    return out


COVER_CLASSES = ('sparse', 'medium', 'dense')


def _class_size(rng, cls, size):
    if cls == 'sparse':
        return int(rng.integers(1, min(3, size) + 1))
    if cls == 'medium':
        return max(1, size // int(rng.integers(4, 9)))
    return int(rng.integers((size + 1) // 2, size + 1))


def _check_covering(seed):
    out = {}
    rng = np.random.default_rng(seed)
    for cls in COVER_CLASSES:
        ok = True
        for _ in range(1000):
            X = int(rng.integers(2, 65))
            S = rng.choice(np.arange(1, X + 1), size=_class_size(rng, cls, X),
                           replace=False).tolist()
            T, history = covering.greedy_translate_cover_int(S, X, return_history=True)
            covered = {s + t for s in S for t in T}
            ok = ok and set(range(1, X + 1)) <= covered \
                and len(T) <= covering.int_cover_bound(X, len(S)) \
                and all(2 * X * b <= a * (2 * X - len(S))
                        for a, b in zip(history, history[1:]))
        out['greedy_int[%s]' % cls] = ok

    for p, n in ((2, 4), (3, 2), (3, 3), (5, 2)):
        size = p**n
        for cls in COVER_CLASSES:
            ok = True
            for i in range(1000):
                idx = rng.choice(size, size=_class_size(rng, cls, size), replace=False)
                S = fp.FpSet(p, n, [fp.from_index(int(j), p, n) for j in idx])
                target = None
                if i % 2:
                    tidx = rng.choice(size, size=int(rng.integers(1, size + 1)),
                                      replace=False)
                    target = fp.FpSet(p, n, [fp.from_index(int(j), p, n) for j in tidx])
                T, history = covering.greedy_translate_cover_fp(S, target=target,
                                                                return_history=True)
                want = target.points if target is not None else set(fp.all_vectors(p, n))
                covered = {fp.add(s, t, p) for s in S for t in T}
                ok = ok and want <= covered \
                    and len(T) <= covering.fp_cover_bound(p, n, len(S)) \
                    and all(size * b <= a * (size - len(S))
                            for a, b in zip(history, history[1:]))
            out['greedy_fp[%d^%d,%s]' % (p, n, cls)] = ok
    return out


def _random_law(rng):
    atoms = int(rng.integers(1, 7))
    xs = rng.integers(-4, 5, size=atoms).tolist()
    ys = rng.integers(-4, 5, size=atoms).tolist()
    ws = rng.integers(1, 10, size=atoms).tolist()
    mass = collections.Counter()
    for x, y, w in zip(xs, ys, ws):
        mass[(x, y)] += w
    total = sum(ws)
    return ent.JointRV({xy: fractions.Fraction(c, total) for xy, c in mass.items()})


# slopes, Q, M
COVER_RV_CONFIGS = [([1], 2, 1), ([0, 1], 2, 1), ([2], 3, 1),
                    (['1/2'], 3, 1), ([sb.INFINITY], 1, 2)]


def _audit_cover_rv(A, N, slopes, Q, M):
    J = ent.cover_to_rv(A, N, slopes, Q, M)
    diff = ent.difference(J)
    w = fractions.Fraction(1, N)
    ok = len(diff) == N and all(v == w for v in diff.mass.values()) \
        and abs(ent.entropy(diff) - math.log(N)) < 1e-12
    for r in (sb.Slope(s) for s in slopes):
        target = A if r.is_infinite else {sb.exact((1 + r.value) * a) for a in A}
        ok = ok and all(v in target for v in ent.rv_projection(J, r).support)
    return ok


def _check_entropy(seed):
    out = {}
    F = fractions.Fraction
    out['uniform'] = abs(ent.entropy(ent.DiscreteDist.uniform(range(8))) - math.log(8)) < 1e-12
    out['point'] = ent.entropy(ent.DiscreteDist.point(0)) == 0.0
    dyadic = ent.DiscreteDist({0: F(1, 2), 1: F(1, 4), 2: F(1, 4)})
    out['dyadic'] = abs(ent.entropy(dyadic) - 1.5 * math.log(2)) < 1e-12

    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(10**4):
        J = _random_law(rng)
        h = ent.entropy(ent.difference(J))
        ok = ok and h <= ent.entropy(J.marginal_x()) + ent.entropy(J.marginal_y()) + 1e-12
    out['subadditivity'] = ok

    ok = True
    for slopes, Q, M in COVER_RV_CONFIGS:
        k = 2 * M * Q
        for N in (1, 2, 5, 8):
            ok = ok and _audit_cover_rv(sb.IntSet(range(k * N)), N, slopes, Q, M)
    C = constructions.quadratic_residue_cover(2, 1)
    out['cover_to_rv'] = ok and _audit_cover_rv(C.S, C.Q - 1, [0], 1, 1)

    eps = ent.katz_tao_epsilon()
    out['katz_tao'] = 0.67512 < eps < 0.67514
    return out


def _check_mt():
    out = {}
    for p in sympy.primerange(2, 32):
        p = int(p)
        J = ent.mt_joint(p)
        h = ent.entropy(ent.difference(J))
        sup = max(ent.projection_entropy(J, r) for r in ent.fp_slopes(p))
        ok = abs(h - ent.mt_difference_entropy(p)) < 1e-9 \
            and sup <= ent.mt_projection_bound(p) + 1e-9
        if p >= 5:
            ok = ok and h / sup >= 1 + 0.1 / math.log(p)
        out['mt(%d)' % p] = ok
    return out


def _check_typical():
    out = {}
    F = fractions.Fraction
    laws = [('dyadic', ent.DiscreteDist({0: F(1, 2), 1: F(1, 4), 2: F(1, 4)}),
             [2**j for j in range(2, 13)]),
            ('mt(3)', ent.difference(ent.mt_joint(3)), [9 * 2**j for j in range(9)])]
    for name, law, ns in laws:
        counts = [ent.typical_logcount(law, None, n) for n in ns]
        out['typical[%s]' % name] = all(abs(t.gap) <= t.stirling_bound for t in counts)
        out['typical_monotone[%s]' % name] = all(
            b.gap <= a.gap for a, b in zip(counts, counts[1:]))
    return out


def _check_es():
    out = {}
    for k, N in ((2, 1), (2, 2), (3, 2)):
        r = es.sandwich_check(k, N, prime_bound=13)
        out['sandwich(%d,%d)' % (k, N)] = r['ok']
    out['pattern{1}'] = es.prime_pattern_search([1], fractions.Fraction(1, 2)) is not None
    out['pattern{1,2}'] = es.prime_pattern_search([1, 2], fractions.Fraction(1, 15)) is not None
    return out


def _check_pipeline(seed):
    r = pipeline.replay_theorem13(3, 'mt', m=1, seed=seed)
    return {'pipeline_mt(3)': r['ok'] and r['final']['besicovitch']}


def _check_all(cfg):
    level = cfg.params.get('level', 'desk')
    assert level == 'desk', 'only the desk level is available'
    steps = [('oracle', lambda: _check_oracles(cfg.caps)),
             ('constructions', lambda: _check_constructions(cfg.caps)),
             ('compression', lambda: _check_compression(cfg.seed, cfg.caps)),
             ('covering', lambda: _check_covering(cfg.seed)),
             ('entropy', lambda: _check_entropy(cfg.seed)),
             ('mt', _check_mt),
             ('typical', _check_typical),
             ('erdos_selfridge', _check_es),
             ('pipeline', lambda: _check_pipeline(cfg.seed))]
    report = {}
    for name, fn in tqdm.tqdm(steps, ncols=70, disable=not cfg.progress):
        t0 = time.perf_counter()
        checks = fn()
        report[name] = {'checks': checks, 'ok': all(checks.values())}
        if cfg.timing:
            report[name]['wall_time'] = time.perf_counter() - t0
        logger.info('check-all: %s %s', name, 'ok' if report[name]['ok'] else 'FAILED')
    ok = all(v['ok'] for v in report.values())
    report['ok'] = ok
    return report, ok


# table --------------------------------------------------------------------

TABLE_COLUMNS = {
    'F': ['k', 'N', 'optimum', 'exhausted', 'construction', 'construction_ok',
          'monotone', 'error'],
    "F'": ['k', 'N', 'optimum', 'exhausted', 'monotone', 'error'],
    'f': ['k', 'n', 'p', 'optimum', 'exhausted', 'reference', 'error'],
    'G': ['k', 'N', "F'", 'G', 'left_holds', 'right_holds', 'right_demonstrated',
          'error'],
    'exponent': ['k', 'm', 'Q', 'digit_exponent', "c'", 'positive', 'error'],
}


def _table_grid(a):
    q = a['quantity']
    if q in ('F', "F'", 'G'):
        return [{'k': k, 'N': N} for k in a['k'] for N in a['N']]
    if q == 'f':
        return [{'k': p, 'n': n, 'p': p} for p in a['p'] for n in a['n']]
    return [{'k': k, 'm': m} for k in a['k'] for m in a['m']]


def _table_row(q, point, caps):
    row = dict(point)
    try:
        if q == 'F':
            r = oracle.min_full_cover(point['k'], point['N'], caps.window, caps.time_budget)
            c = constructions.build_F_upper(point['k'], point['N'], 1, cap=caps.size).size
            row.update(optimum=r.optimum, exhausted=r.exhausted, construction=c,
                       construction_ok=c >= r.optimum)
        elif q == "F'":
            r = oracle.min_distinct_cover(point['k'], point['N'], window_cap=caps.window,
                                          time_budget=caps.time_budget)
            row.update(optimum=r.optimum, exhausted=r.exhausted)
        elif q == 'f':
            r = oracle.min_fp_cover(point['k'], point['n'], point['p'],
                                    time_budget=caps.time_budget)
            row.update(optimum=r.optimum, exhausted=r.exhausted, reference=r.reference)
        elif q == 'G':
            r = es.sandwich_check(point['k'], point['N'], prime_bound=13,
                                  window_cap=caps.window)
            row.update({"F'": r["F'"], 'G': r['G'], 'left_holds': r['left_holds'],
                        'right_holds': r['right_holds'],
                        'right_demonstrated': r['right_demonstrated']})
        else:
            C = constructions.quadratic_residue_cover(point['k'], point['m'], cap=caps.size)
            e = math.log(len(C.S)) / math.log(C.Q)
            row.update({'Q': C.Q, 'digit_exponent': e, "c'": 1 - e, 'positive': e < 1})
    except (exc.KakeyaLabError, ValueError, AssertionError) as e:
        logger.warning('table row %s failed: %s', point, e)
        row['error'] = str(e)
    return row


def _mark_monotone(rows):
    last = {}
    for row in rows:
        k = row['k']
        opt = row.get('optimum')
        if opt is None:
            continue
        row['monotone'] = k not in last or opt >= last[k]
        last[k] = opt


def _table(cfg):
    a = cfg.params
    q = a['quantity']
    grid = _table_grid(a)
    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as pool:
        rows = list(tqdm.tqdm(pool.map(lambda pt: _table_row(q, pt, cfg.caps), grid),
                              total=len(grid), ncols=70, disable=not cfg.progress))
    if q in ('F', "F'"):
        _mark_monotone(rows)
    ok = all('error' not in r for r in rows)
    return {'_csv': (TABLE_COLUMNS[q], rows), 'rows': rows}, ok


HANDLERS = {
    'construct': _construct,
    'oracle': _oracle,
    'entropy': _entropy,
    'cover': _cover,
    'compress': _compress,
    'es': _es,
    'pipeline': _pipeline,
    'check-all': _check_all,
    'table': _table,
}


# rendering ----------------------------------------------------------------

def _flatten(report, prefix=''):
    rows = []
    for key in sorted(report):
        value = report[key]
        name = '%s%s' % (prefix, key)
        if isinstance(value, dict):
            rows.extend(_flatten(value, name + '.'))
        else:
            rows.append([name, json.dumps(_io.to_jsonable(value), sort_keys=True)])
    return rows


def render(cfg, report):
    '''
    Formats a report as text.

    Args:
        cfg (RunConfig): The run configuration, embedded in the text.
        report (dict): The report.

    Returns:
        str: The text.
    '''
    meta = {'config': cfg.to_dict(), 'version': __version__}
    csv_table = report.pop('_csv', None)
    if cfg.format == 'csv':
        line = '# kakeyalabpy %s %s\n' % (
            __version__, json.dumps(_io.to_jsonable(cfg.to_dict()), sort_keys=True))
        if csv_table is not None:
            header, rows = csv_table
        else:
            header, rows = ['key', 'value'], _flatten(report)
        return line + _io.csv_lines(header, rows)
    if cfg.format == 'plain':
        return _io.plain_lines(dict(meta, report=report))
    return _io.dumps(dict(meta, report=report)) + '\n'


def run(cfg):
    '''
    Runs one configuration.

    Returns:
        tuple: The exit status and the report text (`None` when the
        configuration was invalid).
    '''
    handler = HANDLERS[cfg.subcommand]
    t0 = time.perf_counter()
    try:
        report, ok = handler(cfg)
    except (exc.ConstructionError, exc.RetryBudgetExhausted, exc.StageFailed) as e:
        logger.error('%s failed: %s', cfg.subcommand, e)
        report, ok = {'error': str(e), 'error_type': type(e).__name__}, False
    except (exc.KakeyaLabError, ValueError, AssertionError) as e:
        logger.error('invalid configuration: %s', e)
        return EXIT_CONFIG, None
    if cfg.timing and '_csv' not in report:
        report['wall_time'] = time.perf_counter() - t0
    return (EXIT_OK if ok else EXIT_FAILED), render(cfg, report)


# argument parsing -------------------------------------------------------

def _common_parser():
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument('--seed', type=int, default=0, help='Seed of every randomized step.')
    c.add_argument('--threads', type=int, default=1, help='Worker threads for tables.')
    c.add_argument('--cap-window', type=int, default=config.CAP_WINDOW,
                   help='Largest search window of the integer oracles.')
    c.add_argument('--cap-enum', type=int, default=config.CAP_ENUM,
                   help='Largest enumeration.')
    c.add_argument('--cap-size', type=int, default=config.CAP_SIZE,
                   help='Largest constructed set.')
    c.add_argument('--retries', type=int, default=config.RETRIES,
                   help='Samples drawn by randomized steps.')
    c.add_argument('--time-budget', type=float, default=None,
                   help='Seconds an oracle may search before settling.')
    c.add_argument('--format', choices=FORMATS, default=None, help='Report format.')
    c.add_argument('--out', default=None, help='Write the report to this file.')
    c.add_argument('--timing', action='store_true', help='Report wall-clock times.')
    c.add_argument('--progress', action='store_true', help='Show progress bars.')
    c.add_argument('--log2', action='store_true', help='Entropies in bits.')
    c.add_argument('-v', '--verbose', action='count', default=0)
    return c


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog='kakeyalab',
        description='Exact experiments on arithmetic Kakeya quantities.')
    parser.add_argument('--version', action='version', version=__version__)
    sub = parser.add_subparsers(dest='subcommand', required=True)

    p = sub.add_parser('construct', parents=[common], help='Explicit constructions.')
    p.add_argument('--k', type=int, default=2)
    p.add_argument('--m', type=int, default=1)
    p.add_argument('--N', type=int, default=None)
    p.add_argument('--n', type=int, default=None)
    p.add_argument('--p', type=int, default=5)
    p.add_argument('--mt', action='store_true', help='The Mockenhaupt-Tao set.')

    p = sub.add_parser('oracle', parents=[common], help='Exact minima.')
    p.add_argument('--quantity', choices=['F', "F'", 'Fprime', 'f'], default='F')
    p.add_argument('--k', type=int, default=2)
    p.add_argument('--N', type=int, default=1)
    p.add_argument('--p', type=int, default=None)
    p.add_argument('--n', type=int, default=1)
    p.add_argument('--max-difference', type=int, default=None)
    p.add_argument('--compare', action='store_true', help='Compare bounds.')

    p = sub.add_parser('entropy', parents=[common], help='Entropy reports.')
    p.add_argument('--mt', action='store_true', help='The sharpness example.')
    p.add_argument('--katz-tao', action='store_true')
    p.add_argument('--p', type=int, default=3)
    p.add_argument('--N', type=int, default=4)
    p.add_argument('--m', type=int, default=1)
    p.add_argument('--Q', type=int, default=None)
    p.add_argument('--M', type=int, default=None)
    p.add_argument('--slopes', type=_slope_list, default=None)

    p = sub.add_parser('cover', parents=[common], help='Verify or build covers.')
    p.add_argument('--set', type=_int_list, required=True)
    p.add_argument('--k', type=int, default=2)
    p.add_argument('--N', type=int, default=1)
    p.add_argument('--differences', type=_int_list, default=None)
    p.add_argument('--greedy', action='store_true',
                   help='Cover {1..N} by translates of the set.')
    p.add_argument('--cut-and-move', action='store_true')

    p = sub.add_parser('compress', parents=[common], help='Compression arguments.')
    p.add_argument('--k', type=int, default=2)
    p.add_argument('--N', type=int, default=3)
    p.add_argument('--m', type=int, default=1)
    p.add_argument('--n', type=int, default=2)
    p.add_argument('--p', type=int, default=None)
    p.add_argument('--wrap', action='store_true', help='Wrap into F_p^n instead.')

    p = sub.add_parser('es', parents=[common], help='Interval coverage by primes.')
    p.add_argument('--k', type=int, default=2)
    p.add_argument('--N', type=int, default=1)
    p.add_argument('--primes', type=_int_list, default=None)
    p.add_argument('--prime-bound', type=int, default=13)
    p.add_argument('--x-max', type=int, default=10**6)
    p.add_argument('--min-only', action='store_true',
                   help='Only minimize over intervals for --primes.')

    p = sub.add_parser('pipeline', parents=[common], help='Replay the pipeline.')
    p.add_argument('--p', type=int, default=3)
    p.add_argument('--m', type=int, default=1)
    p.add_argument('--law', choices=['mt', 'uniform', 'point'], default='mt')
    p.add_argument('--mode', choices=list(pipeline.MODES), default=None)

    p = sub.add_parser('check-all', parents=[common], help='Acceptance suite.')
    p.add_argument('--level', choices=['desk'], default='desk')

    p = sub.add_parser('table', parents=[common], help='Tables over a grid.')
    p.add_argument('--quantity', choices=sorted(TABLE_COLUMNS), default='F')
    p.add_argument('--k', type=_int_list, default=[2, 3])
    p.add_argument('--N', type=_int_list, default=[1, 2, 3, 4])
    p.add_argument('--p', type=_int_list, default=[2, 3, 5])
    p.add_argument('--n', type=_int_list, default=[1])
    p.add_argument('--m', type=_int_list, default=[1, 2, 3])
    return parser


_RUN_FLAGS = ('seed', 'threads', 'cap_window', 'cap_enum', 'cap_size', 'retries',
              'time_budget', 'format', 'out', 'timing', 'progress', 'verbose',
              'subcommand')


def config_from_args(args):
    params = {k: v for k, v in sorted(vars(args).items()) if k not in _RUN_FLAGS}
    params = {k: v for k, v in params.items() if v is not None and v is not False}
    fmt = args.format or ('csv' if args.subcommand in ('oracle', 'table') else 'json')
    if args.subcommand == 'oracle' and args.quantity == 'f' and args.p is None:
        raise ValueError('--quantity f needs --p')
    caps = config.Caps(window=args.cap_window, enum=args.cap_enum, size=args.cap_size,
                       retries=args.retries, time_budget=args.time_budget)
    return RunConfig(args.subcommand, params, seed=args.seed, caps=caps, format=fmt,
                     out=args.out, threads=args.threads, timing=args.timing,
                     progress=args.progress)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    try:
        cfg = config_from_args(args)
    except ValueError as e:
        parser.print_usage(sys.stderr)
        logger.error('%s', e)
        return EXIT_CONFIG
    status, text = run(cfg)
    if text is None:
        parser.print_usage(sys.stderr)
        return status
    _io.write(text, filename=cfg.out, stream=sys.stdout)
    return status


if __name__ == '__main__':
    sys.exit(main())
