import pytest

from kakeyalabpy import oracle
from kakeyalabpy import sets_projections as sp
from kakeyalabpy import _fp_lib as fp


def test_full_cover_small():
    res = oracle.min_full_cover(2, 3)
    assert res.optimum == 3
    assert res.exhausted
    assert len(res.witness) == 3 and res.witness.min == 0
    assert res.certificate.is_valid_for(res.witness)


def test_full_cover_three_term():
    res = oracle.min_full_cover(3, 2)
    assert res.optimum == 4
    assert sp.covers_interval(res.witness, 3, 2)


def test_full_cover_trivial_k():
    assert oracle.min_full_cover(1, 5).optimum == 1


@pytest.mark.parametrize('k,N', [(2, 4), (3, 3), (4, 2)])
def test_full_cover_witness_is_valid(k, N):
    res = oracle.min_full_cover(k, N)
    assert len(res.witness) == res.optimum
    assert res.lower_bound <= res.optimum
    assert sp.covers_interval(res.witness, k, N)


@pytest.mark.parametrize('N,k_max', [(1, 5), (2, 4), (3, 3)])
def test_full_cover_monotone_in_k(N, k_max):
    optima = [oracle.min_full_cover(k, N).optimum for k in range(1, k_max + 1)]
    assert all(a <= b for a, b in zip(optima, optima[1:]))


def test_full_cover_capped():
    res = oracle.min_full_cover(3, 30, window_cap=40)
    assert not res.exhausted
    assert sp.covers_interval(res.witness, 3, 30)


def test_distinct_cover_small():
    res = oracle.min_distinct_cover(2, 3)
    assert res.optimum == 3
    assert len(res.certificate) == 3
    assert oracle.min_distinct_cover(2, 2).optimum == 3


def test_distinct_at_most_full():
    for k, N in [(2, 4), (3, 3)]:
        assert oracle.min_distinct_cover(k, N).optimum <= oracle.min_full_cover(k, N).optimum


def test_fp_cover_values():
    res = oracle.min_fp_cover(2, 1, 3)
    assert res.optimum == 2
    assert res.certificate.ok
    assert oracle.min_fp_cover(2, 2, 2).optimum == 3


@pytest.mark.parametrize('p', [2, 3, 5])
def test_fp_cover_full_lines_in_line(p):
    res = oracle.min_fp_cover(p, 1, p)
    assert res.optimum == p
    assert res.reference == pytest.approx(p / 2)
    assert isinstance(res.witness, fp.FpSet)


def test_csv_row():
    res = oracle.min_full_cover(2, 3)
    row = res.csv_row()
    assert len(row) == len(oracle.CSV_HEADER)
    assert row[:6] == ['F', 2, 3, None, None, 3]
    assert row[6] == ','.join(str(a) for a in res.witness)
    assert len(res.csv_row(timing=True)) == len(oracle.CSV_HEADER) + 1


def test_fp_witness_text():
    res = oracle.min_fp_cover(2, 2, 2)
    assert res.witness_text().count('(') == 3


def test_compare_bounds_interval():
    report = oracle.compare_bounds(2, N=3)
    assert (report['F'], report["F'"]) == (3, 3)
    assert report['construction'] == 9
    assert report['ok']


def test_compare_bounds_field():
    report = oracle.compare_bounds(2, p=3, n=1)
    assert report['f'] == 2
    assert report["F'(p^n - 1)"] == 3
    assert report['ok']


def test_compare_bounds_needs_one_mode():
    with pytest.raises(AssertionError):
        oracle.compare_bounds(2, N=3, p=3)
