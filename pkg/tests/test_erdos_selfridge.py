import fractions
import math

import numpy as np
import pytest
import sympy

from kakeyalabpy import erdos_selfridge as es
from kakeyalabpy import exceptions as exc
from kakeyalabpy import sets_base as sb

F = fractions.Fraction


def test_instance_validation():
    inst = es.ESInstance([3, 5], 2, 7)
    assert inst.length == 10
    assert inst.multiples() == sb.IntSet([9, 10, 12, 15])
    with pytest.raises(exc.PreconditionError):
        es.ESInstance([3, 9], 2, 0)
    with pytest.raises(AssertionError):
        es.ESInstance([5, 3], 2, 0)


def test_interval_multiple_count():
    assert es.interval_multiple_count(es.ESInstance([3, 5], 2, 1)) == 5
    assert es.interval_multiple_count(es.ESInstance([3, 5], 2, 14)) == 4
    for w in range(-6, 30):
        assert es.interval_multiple_count(es.ESInstance([2, 3], 2, w)) == 4


def test_interval_multiple_count_large_start():
    w = 2**70
    inst = es.ESInstance([3, 5], 1, w)
    assert es.interval_multiple_count(inst) == 2


def test_min_over_intervals_exact():
    res = es.min_over_intervals([3, 5], 2)
    assert (res.w, res.count, res.period) == (7, 4, 15)
    assert res.exhaustive


def test_min_over_intervals_sampled():
    res = es.min_over_intervals([3, 5], 2, search_mode='sample', samples=1000, seed=0)
    assert res.count == 4
    assert not res.exhaustive


def test_derive_delta():
    assert es.derive_delta(sb.IntSet([1, 2]), [1], 2) == (F(1, 10), 'v/u > 4 max A')
    assert es.derive_delta(sb.IntSet([1, 2, 3]), [1, 2], 2) == \
        (F(1, 15), 'p_i/p_N >= 1 - 1/4k')
    assert es.derive_delta(sb.IntSet([1]), [5], 3) == (F(1, 56), 'p_i/p_N >= 1 - 1/4k')


@pytest.mark.parametrize('ds,delta,expected', [
    ([1], F(1, 2), (1, 2, 3)),
    ([1, 2], F(1, 2), (6, 17, 29)),
    ([1, 2], F(1, 14), (6, 167, 179)),
    ([1, 2], F(1, 15), (6, 227, 239)),
])
def test_prime_pattern_search(ds, delta, expected):
    pattern = es.prime_pattern_search(ds, delta)
    assert (pattern.u, pattern.v, pattern.X) == expected
    assert all((1 - delta) * pattern.X <= q <= pattern.X for q in pattern.primes)


def test_prime_pattern_search_none_below_cap():
    assert es.prime_pattern_search([1, 2], F(1, 15), X_max=100) is None


def test_sandwich_single_difference():
    report = es.sandwich_check(2, 1)
    assert (report["F'"], report['G']) == (2, 2)
    assert report['delta'] == F(1, 10)
    right = report['right']
    assert (right['u'], right['v'], right['X']) == (2, 29, 31)
    assert right['claim_holds']
    assert right['count'] == 2
    assert report['ok']


def test_sandwich_two_primes():
    report = es.sandwich_check(2, 2, primes=[3, 5])
    assert (report["F'"], report['G']) == (3, 4)
    assert report['left_mechanism']
    assert report['right']['claim_holds']
    assert report['right']['count'] == 3
    assert report['G_upper'] == 3
    assert report['ok']


def test_sandwich_needs_enough_primes():
    with pytest.raises(exc.PreconditionError):
        es.sandwich_check(2, 4, prime_bound=5)


def test_derive_delta_meets_ratio_condition():
    for A in ([1, 2], [3, 7, 11], [5]):
        delta, binding = es.derive_delta(sb.IntSet(A), [1], 1)
        assert binding == 'v/u > 4 max A'
        assert delta == F(1, 4 * max(A) + 2)
        assert (1 - delta) / delta > 4 * max(A)


def test_inclusion_exclusion_with_huge_moduli():
    primes = [int(p) for p in sympy.primerange(2, 54)]
    assert math.prod(primes) > 2**62
    L = primes[-1]
    w = np.array([0, 1, 30, 10**6], dtype=np.int64)
    counts = es._count_by_inclusion_exclusion(w, L, primes)
    for start, c in zip(w.tolist(), counts.tolist()):
        assert c == es.interval_multiple_count(es.ESInstance(primes, 1, start))
