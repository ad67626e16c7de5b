import dataclasses
import fractions
import math


def _as_fraction(value):
    if isinstance(value, fractions.Fraction):
        return value
    if isinstance(value, str):
        return fractions.Fraction(value.strip())
    return fractions.Fraction(value)


def _simplify(value):
    '''
    Returns an `int` when a rational is integral, else the rational.
    '''
    if isinstance(value, fractions.Fraction) and value.denominator == 1:
        return value.numerator
    return value


class Slope(object):
    '''
    A projection parameter :math:`r \\in \\mathbf{Q} \\cup \\{\\infty\\}`.

    Finite slopes are stored in lowest terms with a positive
    denominator; :data:`INFINITY` is a distinct value unequal to every
    finite slope.

    Args:
        value (int, Fraction, str, Slope): The slope.  Strings may be
            integers, `'p/q'` or `'inf'`.
    '''
    __slots__ = ('_value',)

    def __init__(self, value):
        if isinstance(value, Slope):
            self._value = value._value
        elif isinstance(value, str) and value.strip().lower() in ('inf', 'infinity', '∞'):
            self._value = None
        elif value is None:
            self._value = None
        else:
            self._value = _as_fraction(value)

    @classmethod
    def infinity(cls):
        return cls(None)

    @property
    def is_infinite(self):
        return self._value is None

    @property
    def value(self):
        '''
        Fraction: The rational value, `None` for the infinite slope.
        '''
        return self._value

    @property
    def numerator(self):
        assert not self.is_infinite, 'the infinite slope has no numerator'
        return self._value.numerator

    @property
    def denominator(self):
        assert not self.is_infinite, 'the infinite slope has no denominator'
        return self._value.denominator

    @property
    def is_integral(self):
        return not self.is_infinite and self._value.denominator == 1

    def __eq__(self, other):
        if not isinstance(other, Slope):
            try:
                other = Slope(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._value == other._value

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash(('Slope', self._value))

    def __lt__(self, other):
        # inf sorts last
        if self.is_infinite:
            return False
        if other.is_infinite:
            return True
        return self._value < other._value

    def __str__(self):
        if self.is_infinite:
            return 'inf'
        return str(self._value)

    def __repr__(self):
        return 'Slope(%r)' % str(self)


INFINITY = Slope.infinity()


class IntSet(object):
    '''
    A finite set of integers, stored sorted.

    Args:
        elements (iterable): The integers.  Duplicates are dropped.
    '''
    __slots__ = ('_elements', '_members')

    def __init__(self, elements=()):
        members = frozenset(int(e) for e in elements)
        self._members = members
        self._elements = tuple(sorted(members))

    @property
    def elements(self):
        '''
        tuple: The elements in ascending order.
        '''
        return self._elements

    @property
    def min(self):
        return self._elements[0]

    @property
    def max(self):
        return self._elements[-1]

    def translate(self, t):
        return IntSet(e + t for e in self._elements)

    def dilate(self, c):
        return IntSet(c * e for e in self._elements)

    def sumset(self, other):
        return IntSet(a + b for a in self._elements for b in other)

    def __contains__(self, x):
        return x in self._members

    def __iter__(self):
        return iter(self._elements)

    def __len__(self):
        return len(self._elements)

    def __eq__(self, other):
        if isinstance(other, IntSet):
            return self._members == other._members
        if isinstance(other, (set, frozenset)):
            return self._members == other
        return NotImplemented

    def __hash__(self):
        return hash(self._members)

    def __repr__(self):
        return 'IntSet(%r)' % (list(self._elements),)


class PlanarSet(object):
    '''
    A finite subset of :math:`\\mathbf{Z} \\times \\mathbf{Z}`.

    Args:
        points (iterable): Pairs `(x, y)` of integers.
    '''
    __slots__ = ('_points',)

    def __init__(self, points=()):
        self._points = frozenset((int(x), int(y)) for x, y in points)

    @property
    def points(self):
        return self._points

    def __iter__(self):
        return iter(sorted(self._points))

    def __len__(self):
        return len(self._points)

    def __contains__(self, pair):
        return tuple(pair) in self._points

    def __eq__(self, other):
        if isinstance(other, PlanarSet):
            return self._points == other._points
        return NotImplemented

    def __hash__(self):
        return hash(self._points)

    def __repr__(self):
        return 'PlanarSet(%r)' % (sorted(self._points),)


class PairSetN(object):
    '''
    A finite subset of :math:`\\mathbf{Z}^n \\times \\mathbf{Z}^n`.

    Args:
        n (int): The dimension of each vector.
        points (iterable): Pairs `(x, y)` of length-`n` integer vectors.
    '''
    __slots__ = ('_n', '_points')

    def __init__(self, n, points=()):
        assert n >= 1, 'The dimension must be positive.'
        pts = set()
        for x, y in points:
            x = tuple(int(c) for c in x)
            y = tuple(int(c) for c in y)
            assert len(x) == n and len(y) == n, \
                'All vectors must have length %d.' % n
            pts.add((x, y))
        self._n = n
        self._points = frozenset(pts)

    @property
    def n(self):
        return self._n

    @property
    def points(self):
        return self._points

    def __iter__(self):
        return iter(sorted(self._points))

    def __len__(self):
        return len(self._points)

    def __eq__(self, other):
        if isinstance(other, PairSetN):
            return self._n == other._n and self._points == other._points
        return NotImplemented

    def __hash__(self):
        return hash((self._n, self._points))

    def __repr__(self):
        return 'PairSetN(n=%d, size=%d)' % (self._n, len(self._points))


class APCertificate(object):
    '''
    A map from common difference `d` to the base point `a(d)` of a
    `k`-term progression `a(d), a(d) + d, ..., a(d) + (k-1)d`.

    Over the integers differences and base points are `int`.  When a
    prime `p` is given, they are tuples of residues in
    :math:`\\mathbf{F}_p^n` and arithmetic is coordinatewise mod `p`.

    Args:
        k (int): The progression length.
        entries (dict): Difference to base point.
        p (int): The characteristic for vector certificates.  Default
            is `None` (integers).
    '''
    def __init__(self, k, entries, p=None):
        assert k >= 0, 'Progression length must be non-negative.'
        self.k = int(k)
        self.p = p
        if p is None:
            self.entries = {int(d): int(a) for d, a in entries.items()}
        else:
            self.entries = {
                tuple(c % p for c in d): tuple(c % p for c in a)
                for d, a in entries.items()
            }

    @property
    def ok(self):
        return True

    @property
    def differences(self):
        return sorted(self.entries)

    def progression(self, d):
        '''
        The progression certified for difference `d`.

        Args:
            d (int, tuple): A certified difference.

        Returns:
            list: The `k` points (with repeats when `d` is zero or the
            progression wraps around mod `p`).
        '''
        a = self.entries[d]
        if self.p is None:
            return [a + j * d for j in range(self.k)]
        p = self.p
        return [tuple((ai + j * di) % p for ai, di in zip(a, d))
                for j in range(self.k)]

    def invalid_differences(self, points):
        '''
        Checks every entry against a set.

        Args:
            points (container): The set the progressions should lie in.

        Returns:
            list: The differences whose progression leaves `points`.
        '''
        bad = []
        for d in self.differences:
            if not all(x in points for x in self.progression(d)):
                bad.append(d)
        return bad

    def is_valid_for(self, points):
        return not self.invalid_differences(points)

    def restricted(self, differences):
        return APCertificate(self.k, {d: self.entries[d] for d in differences},
                             self.p)

    def __getitem__(self, d):
        return self.entries[d]

    def __contains__(self, d):
        return d in self.entries

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        if isinstance(other, APCertificate):
            return (self.k, self.p, self.entries) == (other.k, other.p, other.entries)
        return NotImplemented

    def __repr__(self):
        return 'APCertificate(k=%d, differences=%d)' % (self.k, len(self.entries))


class CoverFailure(object):
    '''
    The negative outcome of a cover check.

    Args:
        k (int): The progression length that was asked for.
        uncovered (iterable): Every difference without a progression.
    '''
    def __init__(self, k, uncovered):
        self.k = k
        self.uncovered = tuple(sorted(uncovered))

    @property
    def ok(self):
        return False

    def __repr__(self):
        return 'CoverFailure(k=%d, uncovered=%r)' % (self.k, list(self.uncovered))


def exact(value):
    '''
    Normalises a rational projection value: integral values become
    `int` so that they hash and print like integers.
    '''
    return _simplify(_as_fraction(value))


def log_size(n):
    return math.log(n) if n > 0 else float('-inf')


class Record(object):
    '''
    Mixin for the dataclass result records: `to_dict` lists the fields
    in declaration order for the report writers.
    '''
    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
