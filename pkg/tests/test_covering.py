import pytest

from kakeyalabpy import covering as cov
from kakeyalabpy import exceptions as exc
from kakeyalabpy import sets_base as sb
from kakeyalabpy import _fp_lib as fp


def _covers(S, T, X):
    return set(range(1, X + 1)) <= {s + t for s in S for t in T}


def test_greedy_int_singleton():
    T = cov.greedy_translate_cover_int(sb.IntSet([1]), 3)
    assert T == sb.IntSet([0, 1, 2])


@pytest.mark.parametrize('S,X', [([1, 3], 4), ([1, 2, 5], 20), ([2, 3, 7, 11], 40)])
def test_greedy_int_covers_within_bound(S, X):
    T, history = cov.greedy_translate_cover_int(sb.IntSet(S), X, return_history=True)
    assert _covers(S, T, X)
    assert len(T) <= cov.int_cover_bound(X, len(S))
    assert history[0] == X and history[-1] == 0
    assert all(b < a for a, b in zip(history, history[1:]))


def test_greedy_int_preconditions():
    with pytest.raises(exc.PreconditionError):
        cov.greedy_translate_cover_int(sb.IntSet([]), 5)
    with pytest.raises(exc.PreconditionError):
        cov.greedy_translate_cover_int(sb.IntSet([0, 1]), 5)


def test_greedy_fp_line():
    S = fp.FpSet(3, 2, [(0, 0), (1, 0), (2, 0)])
    T = cov.greedy_translate_cover_fp(S)
    assert len(T) == 3
    covered = {fp.add(s, t, 3) for s in S for t in T}
    assert covered == set(fp.all_vectors(3, 2))


def test_greedy_fp_target():
    S = fp.FpSet(5, 2, [(1, 0), (0, 1), (2, 3)])
    target = fp.FpSet(5, 2, fp.nonzero_vectors(5, 2))
    T, history = cov.greedy_translate_cover_fp(S, target=target, return_history=True)
    covered = {fp.add(s, t, 5) for s in S for t in T}
    assert target.points <= covered
    assert history[0] == 24 and history[-1] == 0
    assert len(T) <= cov.fp_cover_bound(5, 2, 3)


def test_extend_full_difference_cover_line():
    A = fp.FpSet(3, 2, [(0, 0), (1, 0), (2, 0)])
    res = cov.extend_full_difference_cover(A, [(1, 0)], 3)
    assert res.certificate.differences == sorted(fp.nonzero_vectors(3, 2))
    assert res.certificate.is_valid_for(res.A)
    assert len(res.A) <= 3 * len(res.T) * len(A)


def test_extend_full_difference_cover_full_space():
    A = fp.FpSet.full(5, 1)
    res = cov.extend_full_difference_cover(A, [(1,)], 5)
    assert res.A == A


def test_extend_rejects_uncovered_direction():
    A = fp.FpSet(3, 2, [(0, 0), (1, 0), (2, 0)])
    with pytest.raises(exc.PreconditionError) as info:
        cov.extend_full_difference_cover(A, [(1, 0), (0, 1)], 3)
    assert info.value.uncovered == ((0, 1),)
