"""
Exact branch-and-bound values of the minimal cover sizes
:math:`F_k(N)`, :math:`F'_k(N)` and :math:`f_{k,n}(p)` on small
instances.

Sets are bitmasks over a normalized window of positions.  Each oracle
starts from the singleton `{0}` (every cover may be translated to
contain 0 as its least element, or as a point in the finite field
case), computes a greedy incumbent, and then runs an iterative
deepening search over the set size.  A node is cut when the remaining
budget `r` of new points cannot produce enough new differences: new
points meet the `m` current points in at most :math:`rm + \\binom{r}{2}`
pairs (twice that for ordered pairs in :math:`\\mathbf{F}_p^n`).

For :math:`F_k(N)` the window is :math:`\\{0, \\ldots, (k-1)N\\}`.  For
:math:`F'_k(N)` the differences are capped at :math:`D = \\max(2, k-1)N`
and the window is :math:`\\{0, \\ldots, (k-1)D\\}`.  Both truncations
are normalization lemmas of this package, documented with the oracles.
"""
import abc
import dataclasses
import logging
import math
import time

from . import config
from . import constructions
from . import sets_base as sb
from . import sets_projections as sp
from . import _fp_lib as fp

logger = logging.getLogger(__name__)


class _OutOfTime(Exception):
    pass


def _popcount(x):
    return bin(x).count('1')


def _bits(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _min_pairs_size(N):
    s = 1
    while s * (s - 1) // 2 < N:
        s += 1
    return s


@dataclasses.dataclass
class OracleResult(sb.Record):
    quantity: str
    params: dict
    optimum: int
    witness: object
    certificate: object
    exhausted: bool
    lower_bound: int
    nodes: int
    wall_time: float
    reference: float = None

    def witness_text(self):
        if isinstance(self.witness, fp.FpSet):
            return ';'.join('(%s)' % ','.join(str(c) for c in v) for v in self.witness)
        return ','.join(str(v) for v in self.witness)

    def csv_row(self, timing=False):
        row = [self.quantity, self.params.get('k'), self.params.get('N'),
               self.params.get('p'), self.params.get('n'), self.optimum,
               self.witness_text(), self.exhausted, self.nodes]
        if timing:
            row.append('%.6f' % self.wall_time)
        return row


CSV_HEADER = ['quantity', 'k', 'N', 'p', 'n', 'optimum', 'witness',
              'exhausted', 'nodes']


class _Oracle(abc.ABC):
    '''
    Common driver of the exact searches.

    Args:
        k (int): Progression length, at least 1.
        time_budget (float): Seconds before the search gives up and
            returns its incumbent with `exhausted = False`.  `None`
            means no limit.
    '''
    quantity = None

    def __init__(self, k, time_budget=None):
        assert k >= 1, 'Progression length must be at least 1.'
        self.k = int(k)
        self.time_budget = time_budget
        self.nodes = 0
        self._deadline = None
        self._placements = None
        self._seen = set()

    @abc.abstractmethod
    def _universe(self):
        '''
        Number of window positions, or `None` when the instance is over
        its cap and only a bound can be given.
        '''
        pass

    @abc.abstractmethod
    def _build_placements(self, size):
        pass

    @abc.abstractmethod
    def _search(self, s):
        '''
        A set of size at most `s` meeting the requirement, or `None`.
        '''
        pass

    @abc.abstractmethod
    def _greedy(self):
        pass

    @abc.abstractmethod
    def _lower_bound(self):
        pass

    @abc.abstractmethod
    def _witness(self, mask):
        pass

    @abc.abstractmethod
    def _params(self):
        pass

    def _reference(self):
        return None

    def _tick(self):
        self.nodes += 1
        if self._deadline is not None and self.nodes % 256 == 0 \
                and time.perf_counter() > self._deadline:
            raise _OutOfTime()

    def _new_points(self, A, m):
        return _popcount(m & ~A)

    def _covered(self, d, A):
        return any(m & A == m for m in self._placements[d])

    def solve(self):
        '''
        Runs the search.

        Returns:
            OracleResult: The optimum and a verified witness.  When the
            instance is over its cap, or the time budget runs out, the
            greedy (or best found) set is returned as an upper bound
            with `exhausted = False`.
        '''
        start = time.perf_counter()
        if self.time_budget is not None:
            self._deadline = start + self.time_budget
        size = self._universe()
        capped = size is None
        self._build_placements(size)

        incumbent = self._greedy()
        best = _popcount(incumbent)
        lb = self._lower_bound()
        exhausted = not capped
        if not capped:
            try:
                for s in range(lb, best):
                    self._seen = set()
                    found = self._search(s)
                    if found is not None:
                        incumbent, best = found, _popcount(found)
                        break
            except _OutOfTime:
                exhausted = False
                logger.info('%s oracle: time budget spent after %d nodes',
                            self.quantity, self.nodes)
        witness, cert = self._witness(incumbent)
        wall = time.perf_counter() - start
        logger.info('%s oracle %s: optimum %d (exhausted=%s, nodes=%d)',
                    self.quantity, self._params(), best, exhausted, self.nodes)
        return OracleResult(self.quantity, self._params(), best, witness, cert,
                            exhausted, lb, self.nodes, wall, self._reference())


class _CoverAllOracle(_Oracle):
    '''
    Search for the smallest set holding a placement for every key.
    '''
    def _capacity(self, r, m):
        return r * m + r * (r - 1) // 2

    def _keys(self):
        return sorted(self._placements)

    def _greedy(self):
        A = 1
        for d in self._keys():
            if not self._covered(d, A):
                A |= min(self._placements[d],
                         key=lambda m: (self._new_points(A, m), m))
        return A

    def _search(self, s):
        uncovered = [d for d in self._keys() if not self._covered(d, 1)]
        return self._dfs(1, 1, uncovered, s)

    def _dfs(self, A, size, uncovered, s):
        self._tick()
        if not uncovered:
            return A
        r = s - size
        if r <= 0 or len(uncovered) > self._capacity(r, size):
            return None
        best_d, best_opts = None, None
        for d in uncovered:
            opts = []
            for m in self._placements[d]:
                new = self._new_points(A, m)
                if new <= r:
                    opts.append((new, m))
            if not opts:
                return None
            if best_opts is None or len(opts) < len(best_opts):
                best_d, best_opts = d, opts
        for new, m in sorted(best_opts):
            A2 = A | m
            if A2 in self._seen:
                continue
            self._seen.add(A2)
            rest = [d for d in uncovered if d != best_d and not self._covered(d, A2)]
            found = self._dfs(A2, size + new, rest, s)
            if found is not None:
                return found
        return None


class FullCoverOracle(_CoverAllOracle):
    '''
    :math:`F_k(N)`: the smallest set of integers with a `k`-term
    progression of every difference :math:`1, \\ldots, N`.

    Args:
        k (int): Progression length.
        N (int): Number of differences.
        window_cap (int): Largest window :math:`(k-1)N` searched
            exactly.
        time_budget (float): Seconds before giving up.
    '''
    quantity = 'F'

    def __init__(self, k, N, window_cap=config.CAP_WINDOW, time_budget=None):
        _Oracle.__init__(self, k, time_budget)
        assert N >= 1, 'N must be positive.'
        self.N = int(N)
        self.window_cap = window_cap

    def _window(self):
        return (self.k - 1) * self.N

    def _universe(self):
        W = self._window()
        return None if W > self.window_cap else W + 1

    def _build_placements(self, size):
        W = self._window()
        k = self.k
        self._placements = {
            d: [sum(1 << (a + j * d) for j in range(k))
                for a in range(0, W - (k - 1) * d + 1)]
            for d in range(1, self.N + 1)}

    def _lower_bound(self):
        if self.k == 1:
            return 1
        return max(self.k, _min_pairs_size(self.N))

    def _witness(self, mask):
        A = sb.IntSet(_bits(mask))
        cert = sp.verify_cover(A, self.k, range(1, self.N + 1))
        assert cert.ok, 'oracle witness fails verification'
        return A, cert

    def _params(self):
        return {'k': self.k, 'N': self.N}


class DistinctCoverOracle(_Oracle):
    '''
    :math:`F'_k(N)`: the smallest set of integers with `k`-term
    progressions of `N` distinct positive differences.

    Differences are searched up to `max_difference` (default
    :math:`\\max(2, k-1)N`) inside the window
    :math:`\\{0, \\ldots, (k-1)\\,\\mathrm{max\\_difference}\\}`, and are
    added in increasing order.

    Args:
        k (int): Progression length.
        N (int): Number of distinct differences.
        max_difference (int): Largest difference searched.
        window_cap (int): Largest window searched exactly.
        time_budget (float): Seconds before giving up.
    '''
    quantity = "F'"

    def __init__(self, k, N, max_difference=None, window_cap=config.CAP_WINDOW,
                 time_budget=None):
        _Oracle.__init__(self, k, time_budget)
        assert N >= 1, 'N must be positive.'
        self.N = int(N)
        if max_difference is None:
            max_difference = max(2, self.k - 1) * self.N
        assert max_difference >= N, 'max_difference must be at least N.'
        self.max_difference = int(max_difference)
        self.window_cap = window_cap

    def _window(self):
        return (self.k - 1) * self.max_difference

    def _universe(self):
        W = self._window()
        if W > self.window_cap:
            self.max_difference = max(self.N, self.window_cap // max(1, self.k - 1))
            return None
        return W + 1

    def _build_placements(self, size):
        W = self._window()
        k = self.k
        self._placements = {
            d: [sum(1 << (a + j * d) for j in range(k))
                for a in range(0, W - (k - 1) * d + 1)]
            for d in range(1, self.max_difference + 1)}

    def _covered_set(self, A):
        return [d for d in self._placements if self._covered(d, A)]

    def _greedy(self):
        A = 1
        count = len(self._covered_set(A))
        for d in sorted(self._placements):
            if count >= self.N:
                break
            if self._covered(d, A):
                continue
            A |= min(self._placements[d], key=lambda m: (self._new_points(A, m), m))
            count = len(self._covered_set(A))
        return A

    def _search(self, s):
        return self._dfs(1, 1, 0, s)

    def _dfs(self, A, size, last_d, s):
        self._tick()
        covered = set(self._covered_set(A))
        missing = self.N - len(covered)
        if missing <= 0:
            return A
        r = s - size
        if r <= 0 or missing > r * size + r * (r - 1) // 2:
            return None
        for d in range(last_d + 1, self.max_difference + 1):
            if d in covered:
                continue
            opts = sorted((self._new_points(A, m), m) for m in self._placements[d])
            for new, m in opts:
                if new > r:
                    break
                A2 = A | m
                if (A2, d) in self._seen:
                    continue
                self._seen.add((A2, d))
                found = self._dfs(A2, size + new, d, s)
                if found is not None:
                    return found
        return None

    def _lower_bound(self):
        if self.k == 1:
            return 1
        return max(self.k, _min_pairs_size(self.N))

    def _witness(self, mask):
        A = sb.IntSet(_bits(mask))
        ds = sorted(self._covered_set(mask))[:self.N]
        cert = sp.verify_cover(A, self.k, ds)
        assert cert.ok and len(cert) == self.N, 'oracle witness fails verification'
        return A, cert

    def _params(self):
        return {'k': self.k, 'N': self.N, 'max_difference': self.max_difference}


class FpCoverOracle(_CoverAllOracle):
    '''
    :math:`f_{k,n}(p)`: the smallest subset of :math:`\\mathbf{F}_p^n`
    with a `k`-term progression in every nonzero direction.

    Args:
        k (int): Progression length.
        n (int): Dimension.
        p (int): A prime.
        fp_cap (int): Largest :math:`p^n` searched exactly.
        time_budget (float): Seconds before giving up.
    '''
    quantity = 'f'

    def __init__(self, k, n, p, fp_cap=config.CAP_FP, time_budget=None):
        _Oracle.__init__(self, k, time_budget)
        self.n = int(n)
        self.p = fp.check_prime(p)
        self.fp_cap = fp_cap

    def _universe(self):
        size = self.p**self.n
        return None if size > self.fp_cap else size

    def _capacity(self, r, m):
        return 2 * r * m + r * (r - 1)

    def _build_placements(self, size):
        p, n, k = self.p, self.n, self.k
        vectors = list(fp.all_vectors(p, n))
        self._placements = {}
        for d in fp.nonzero_vectors(p, n):
            masks = set()
            for a in vectors:
                masks.add(sum(1 << fp.to_index(fp.add(a, fp.scale(j, d, p), p), p)
                              for j in range(min(k, p))))
            self._placements[d] = sorted(masks)

    def _lower_bound(self):
        s = 1
        while s * (s - 1) < self.p**self.n - 1:
            s += 1
        return max(min(self.k, self.p), s) if self.k > 1 else 1

    def _witness(self, mask):
        A = fp.FpSet(self.p, self.n, (fp.from_index(i, self.p, self.n)
                                      for i in _bits(mask)))
        cert = fp.verify_fp_cover(A, self.k, fp.nonzero_vectors(self.p, self.n))
        assert cert.ok, 'oracle witness fails verification'
        return A, cert

    def _params(self):
        return {'k': self.k, 'n': self.n, 'p': self.p}

    def _reference(self):
        if self.k == self.p:
            return (self.p / 2.0)**self.n
        return None


def min_full_cover(k, N, window_cap=config.CAP_WINDOW, time_budget=None):
    return FullCoverOracle(k, N, window_cap, time_budget).solve()


def min_distinct_cover(k, N, max_difference=None, window_cap=config.CAP_WINDOW,
                       time_budget=None):
    return DistinctCoverOracle(k, N, max_difference, window_cap, time_budget).solve()


def min_fp_cover(k, n, p, fp_cap=config.CAP_FP, time_budget=None):
    return FpCoverOracle(k, n, p, fp_cap, time_budget).solve()


def compare_bounds(k, N=None, p=None, n=1, window_cap=config.CAP_WINDOW,
                   time_budget=None):
    '''
    Checks the oracle values against each other and against the
    constructions.

    With `N`: :math:`F'_k(N) \\le F_k(N) \\le 12 k^3 (1 + \\log N)
    F'_k(N)`, and the quadratic-residue construction with one prime is
    at least :math:`F_k(N)`.  With `p`: the unwrapping inequality
    :math:`k^n f_{k,n}(p) \\ge F'_k(p^n - 1)`.

    Returns:
        dict: The values, the checks and `ok`.
    '''
    assert (N is None) != (p is None), 'Give exactly one of N and p.'
    report = {'k': k}
    checks = {}
    if N is not None:
        F = min_full_cover(k, N, window_cap, time_budget)
        Fp = min_distinct_cover(k, N, window_cap=window_cap, time_budget=time_budget)
        report.update({'N': N, 'F': F.optimum, "F'": Fp.optimum,
                       'exhausted': F.exhausted and Fp.exhausted})
        checks["F' <= F"] = Fp.optimum <= F.optimum or not Fp.exhausted
        checks['F <= 12 k^3 (1 + ln N) F\''] = \
            F.optimum <= 12 * k**3 * (1 + math.log(N)) * Fp.optimum
        upper = constructions.build_F_upper(k, N, 1)
        report['construction'] = upper.size
        report['construction_gap'] = upper.size - F.optimum
        checks['construction >= F'] = upper.size >= F.optimum or not F.exhausted
    else:
        f = min_fp_cover(k, n, p, time_budget=time_budget)
        report.update({'p': p, 'n': n, 'f': f.optimum, 'exhausted': f.exhausted})
        if p**n > 1:
            Fp = min_distinct_cover(k, p**n - 1, window_cap=window_cap,
                                    time_budget=time_budget)
            report["F'(p^n - 1)"] = Fp.optimum
            report['exhausted'] = report['exhausted'] and Fp.exhausted
            checks["k^n f >= F'(p^n - 1)"] = \
                k**n * f.optimum >= Fp.optimum or not Fp.exhausted
        if f.reference is not None:
            report['reference'] = f.reference
    report['checks'] = checks
    report['ok'] = all(checks.values())
    return report
