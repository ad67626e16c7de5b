import fractions
import math

import numpy as np
import pytest

from kakeyalabpy import compression as comp
from kakeyalabpy import exceptions as exc
from kakeyalabpy import sets_base as sb
from kakeyalabpy import sets_projections as sp
from kakeyalabpy import _fp_lib as fp


def test_theta_map():
    phi = comp.ThetaMap(fractions.Fraction(1, 3), 6)
    assert [phi(x) for x in [1, 2, 3, 4]] == [2, 4, 0, 2]
    assert comp.phi_theta(2, phi) == 4


def test_theta_map_bounds():
    with pytest.raises(AssertionError):
        comp.ThetaMap(fractions.Fraction(3, 2), 4)


def test_collision_pairs():
    assert comp.collision_pairs([1, 1, 2, 2, 2]) == 4
    assert comp.collision_pairs([1, 2, 3]) == 0


def _spread_progressions(ds, k):
    A = sb.IntSet(j * d for d in ds for j in range(k))
    return A, sb.APCertificate(k, {d: 0 for d in ds})


def test_distinct_to_full():
    k, N = 3, 4
    A0, cert = _spread_progressions([1, 5, 9, 13], k)
    res = comp.distinct_to_full(A0, cert, k, N, seed=1)
    assert sp.covers_interval(res.A, k, N)
    assert res.certificate.differences == [1, 2, 3, 4]
    assert len(res.A) <= res.bound
    assert 0 < res.theta < 1
    assert res.collisions <= N - 1
    assert 3 * res.distinct >= N


def test_distinct_to_full_is_seeded():
    A0, cert = _spread_progressions([2, 7, 11, 19, 23], 2)
    a = comp.distinct_to_full(A0, cert, 2, 5, seed=4)
    b = comp.distinct_to_full(A0, cert, 2, 5, seed=4)
    assert a.theta == b.theta
    assert a.A == b.A


def test_distinct_to_full_preconditions():
    A0, cert = _spread_progressions([1, 5], 3)
    with pytest.raises(exc.PreconditionError):
        comp.distinct_to_full(A0, cert, 3, 4)
    with pytest.raises(exc.PreconditionError):
        comp.distinct_to_full(sb.IntSet([0, 1]), cert, 3, 2)


def test_minimal_dimension():
    assert comp.minimal_dimension(3, 9) == 2
    assert comp.minimal_dimension(3, 10) == 3
    assert comp.minimal_dimension(5, 1) == 1


def test_random_linear_compress_identity():
    A = fp.FpSet.full(3, 2)
    D = list(fp.nonzero_vectors(3, 2))
    res = comp.random_linear_compress(A, D, matrix=np.eye(2, dtype=int))
    assert res.n == 2
    assert res.A == A
    assert res.count == 8
    assert res.attempts == 1


def test_random_linear_compress_projection():
    A = fp.FpSet.full(3, 2)
    res = comp.random_linear_compress(A, [(1, 0), (0, 1)], matrix=[[1, 0]])
    assert res.n == 1
    assert res.count == 1
    assert res.A == fp.FpSet.full(3, 1)


def test_random_linear_compress_sampled():
    A = fp.FpSet.full(5, 2)
    D = [(1, 0), (0, 1), (1, 1), (1, 2), (1, 3), (1, 4)]
    res = comp.random_linear_compress(A, D, seed=2)
    assert res.n == 2
    assert 2 * res.count >= len(D)
    assert fp.verify_fp_cover(res.A, 5, res.directions).ok


def test_random_linear_compress_preconditions():
    A = fp.FpSet(3, 2, [(0, 0), (1, 0)])
    with pytest.raises(exc.PreconditionError):
        comp.random_linear_compress(A, [(1, 0)])
    with pytest.raises(exc.PreconditionError):
        comp.random_linear_compress(A, [])


def test_theta_map_quasi_morphism():
    rng = np.random.default_rng(0)
    for _ in range(10**4):
        N = int(rng.integers(1, 50))
        phi = comp.ThetaMap(fractions.Fraction(int(rng.integers(1, 10**6)), 10**6), N)
        x, y = (int(v) for v in rng.integers(-10**6, 10**6, size=2))
        assert phi(x + y) - phi(x) - phi(y) in (0, 1, -N, 1 - N)
        assert 0 <= phi(x) < N


def _random_certified_instance(rng):
    k = int(rng.integers(2, 5))
    N = int(rng.integers(1, 13))
    ds = sorted(int(d) for d in rng.choice(np.arange(1, 200), size=N, replace=False))
    starts = rng.integers(0, 50, size=N).tolist()
    A0 = sb.IntSet(a + j * d for a, d in zip(starts, ds) for j in range(k))
    return A0, sp.verify_cover(A0, k, ds), k, N


@pytest.mark.parametrize('seed', range(25))
def test_distinct_to_full_random_instances(seed):
    rng = np.random.default_rng(seed)
    A0, cert, k, N = _random_certified_instance(rng)
    res = comp.distinct_to_full(A0, cert, k, N, seed=seed)
    assert sp.covers_interval(res.A, k, N)
    assert len(res.A) <= comp.SIZE_CONSTANT * k**3 * (1 + math.log(N)) * len(A0)
    assert res.attempts <= 64
    assert 3 * res.distinct >= N
