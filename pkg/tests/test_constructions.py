import math

import pytest

from kakeyalabpy import constructions as con
from kakeyalabpy import exceptions as exc
from kakeyalabpy import sets_base as sb
from kakeyalabpy import sets_projections as sp
from kakeyalabpy import _fp_lib as fp


def test_odd_primes_and_m():
    assert con.odd_primes(3) == [3, 5, 7]
    assert con.theorem_m(1) == 1
    assert con.theorem_m(2) == 7


def test_quadratic_residue_cover_small():
    C = con.quadratic_residue_cover(2, 1)
    assert C.Q == 3
    assert C.S == sb.IntSet([1, 2, 3])
    assert C.bound == 8
    assert C.certificate.differences == [1, 2]


@pytest.mark.parametrize('k,m', [(2, 2), (3, 2), (4, 1), (5, 2)])
def test_quadratic_residue_cover_bound(k, m):
    C = con.quadratic_residue_cover(k, m)
    assert len(C.S) <= k * k * math.prod((p + 1) // 2 for p in C.primes)
    assert C.certificate.is_valid_for(C.S)
    assert C.certificate.differences == list(range(1, C.Q))


def test_quadratic_residue_cover_cap():
    with pytest.raises(exc.InstanceTooLarge):
        con.quadratic_residue_cover(3, 3, cap=100)


def test_digit_concatenate_two_digits():
    C = con.quadratic_residue_cover(2, 1)
    A, cert = con.digit_concatenate(C, 2)
    assert A == sb.IntSet(range(4, 13))
    assert cert.differences == list(range(9))
    assert cert[0] == 4
    assert cert.is_valid_for(A)


def test_build_F_upper():
    res = con.build_F_upper(2, 5, 1)
    assert res.n == 2
    assert res.size == 9
    assert res.certificate.differences == [1, 2, 3, 4, 5]
    assert sp.covers_interval(res.A, 2, 5)
    assert res.exponent == pytest.approx(math.log(9) / math.log(5))
    assert res.digit_exponent == pytest.approx(1.0)


def test_build_F_upper_trivial_N():
    res = con.build_F_upper(3, 1, 1)
    assert res.exponent is None
    assert res.n == 1


@pytest.mark.parametrize('p', [2, 3, 5, 7])
def test_mockenhaupt_tao_size(p):
    V = con.mockenhaupt_tao(p)
    assert len(V) == p * (p + 1) // 2


@pytest.mark.parametrize('p', [5, 7])
def test_mockenhaupt_tao_lines(p):
    V = con.mockenhaupt_tao(p)
    assert fp.full_line_directions(V) == frozenset((1, v) for v in range(p))


def test_mockenhaupt_tao_rejects_composite():
    with pytest.raises(exc.PreconditionError):
        con.mockenhaupt_tao(6)


def test_fp_unwrap_mockenhaupt_tao():
    V = con.mockenhaupt_tao(5)
    res = con.fp_unwrap(V, 2)
    assert res.count == len(fp.covered_directions(V, 2)) + 1
    assert res.certificate.is_valid_for(res.A)
    assert len(res.A) <= 2**2 * len(V)
    assert res.base == sp.minimal_freiman_base(2, 9, 2)


def test_fp_unwrap_rejects_bad_certificate():
    A = fp.FpSet(5, 1, [(0,), (1,)])
    cert = sb.APCertificate(3, {(1,): (0,)}, p=5)
    with pytest.raises(exc.PreconditionError):
        con.fp_unwrap(A, 3, certificate=cert)


def test_wrap_to_fp():
    k, N = 4, 16
    A = sb.IntSet(range(1, 50))
    res = con.wrap_to_fp(A, k, N, 2, seed=3, retries=2000)
    assert (res.M, res.p) == (4, 5)
    assert res.progression_length == 2
    assert res.count >= res.threshold
    assert res.count == len(fp.covered_directions(res.A, 2))
    assert -10 * k * N <= res.t < 20 * k * N


def test_wrap_to_fp_preconditions():
    A = sb.IntSet(range(1, 50))
    with pytest.raises(exc.PreconditionError):
        con.wrap_to_fp(A, 4, 3, 2)
    with pytest.raises(exc.PreconditionError):
        con.wrap_to_fp(A, 4, 16, 2, p=11)


def test_wrap_to_fp_retry_budget():
    A = sb.IntSet(range(1, 50))
    with pytest.raises(exc.RetryBudgetExhausted) as info:
        con.wrap_to_fp(A, 4, 16, 2, c=100.0, retries=3)
    assert info.value.attempts == 3


@pytest.mark.parametrize('k,m', [(2, 2), (3, 2), (4, 2), (3, 3)])
def test_quadratic_residue_cover_residues(k, m):
    C = con.quadratic_residue_cover(k, m)
    for p in C.primes:
        for j in range(k):
            residues = {(C.certificate[d] + j * d) % p for d in range(1, C.Q)}
            assert len(residues) <= (p + 1) // 2


@pytest.mark.parametrize('k,N,m', [(2, 8, 1), (3, 20, 1), (4, 30, 1), (2, 40, 2)])
def test_build_F_upper_size_bounds(k, N, m):
    res = con.build_F_upper(k, N, m)
    assert res.size <= k * res.Q**res.n
    assert sp.covers_interval(res.A, k, N)
