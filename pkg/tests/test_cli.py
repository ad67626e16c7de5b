import csv
import json

import pytest

from kakeyalabpy import __version__
from kakeyalabpy import cli
from kakeyalabpy import sets_base as sb


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_int_list():
    assert cli._int_list('1-3,5') == [1, 2, 3, 5]
    assert cli._int_list('7') == [7]


def test_oracle_csv(capsys):
    status = cli.main(['oracle', '--quantity', 'F', '--k', '2', '--N', '3'])
    assert status == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith('# kakeyalabpy %s ' % __version__)
    assert lines[1].startswith('# quantity,k,N')
    row = next(csv.reader([lines[2]]))
    assert row[0] == 'F'
    assert row[5] == '3'
    assert len(row[6].split(',')) == 3


def test_oracle_json(capsys):
    status = cli.main(['oracle', '--quantity', 'f', '--k', '2', '--p', '3',
                       '--format', 'json'])
    assert status == 0
    out = _json(capsys)
    assert out['version'] == __version__
    assert out['report']['optimum'] == 2
    assert out['config']['params']['p'] == 3


def test_oracle_field_needs_prime(capsys):
    assert cli.main(['oracle', '--quantity', 'f', '--k', '2']) == 2


def test_cover_failure_exit_status(capsys):
    status = cli.main(['cover', '--set', '0,1', '--k', '3', '--N', '2'])
    assert status == 1
    assert _json(capsys)['report']['uncovered'] == [1, 2]


def test_cover_greedy(capsys):
    assert cli.main(['cover', '--set', '1', '--N', '3', '--greedy']) == 0
    assert _json(capsys)['report']['T'] == [0, 1, 2]


def test_instance_too_large_is_a_configuration_error(capsys):
    status = cli.main(['construct', '--k', '3', '--m', '3', '--cap-size', '100'])
    assert status == 2
    assert capsys.readouterr().out == ''


def test_bad_list_argument():
    with pytest.raises(SystemExit) as info:
        cli.main(['cover', '--set', 'a,b'])
    assert info.value.code == 2


def test_entropy_katz_tao(capsys):
    assert cli.main(['entropy', '--katz-tao']) == 0
    assert _json(capsys)['report']['epsilon'] == pytest.approx(0.67513, abs=1e-4)


def test_entropy_cover_law(capsys):
    assert cli.main(['entropy', '--N', '4']) == 0
    report = _json(capsys)['report']
    assert report['Q'] == 1 and report['M'] == 2
    assert report['H(X-Y)'] == pytest.approx(report['log N'])


def test_es_min_only(capsys):
    assert cli.main(['es', '--min-only', '--primes', '3,5', '--k', '2']) == 0
    report = _json(capsys)['report']
    assert (report['w'], report['count']) == (7, 4)


def test_pipeline_uniform_law(capsys):
    assert cli.main(['pipeline', '--p', '3', '--law', 'uniform']) == 0
    report = _json(capsys)['report']
    assert report['mode'] == 'support'
    assert report['final']['size'] == 3
    assert report['final']['besicovitch']


def test_pipeline_point_law_is_degenerate(capsys):
    assert cli.main(['pipeline', '--p', '3', '--law', 'point']) == 0
    assert _json(capsys)['report']['final']['degenerate']


def test_runs_are_reproducible(capsys):
    args = ['compress', '--k', '2', '--N', '3', '--seed', '5']
    cli.main(args)
    first = capsys.readouterr().out
    cli.main(args)
    assert capsys.readouterr().out == first


def test_table_rows(capsys):
    status = cli.main(['table', '--quantity', 'F', '--k', '2', '--N', '1-3',
                       '--threads', '2'])
    assert status == 0
    lines = capsys.readouterr().out.splitlines()
    rows = list(csv.reader(lines[2:]))
    assert [r[2] for r in rows] == ['2', '2', '3']
    assert all(r[6] == 'true' for r in rows)


def test_out_file(tmp_path, capsys):
    target = tmp_path / 'report.json'
    assert cli.main(['construct', '--mt', '--p', '5', '--out', str(target)]) == 0
    assert capsys.readouterr().out == ''
    report = json.loads(target.read_text())['report']
    assert report['size'] == 15


@pytest.mark.parametrize('slopes,Q,M', cli.COVER_RV_CONFIGS)
def test_cover_rv_audit(slopes, Q, M):
    k = 2 * M * Q
    for N in (1, 3):
        assert cli._audit_cover_rv(sb.IntSet(range(k * N)), N, slopes, Q, M)


def test_check_typical_passes():
    checks = cli._check_typical()
    assert set(checks) == {'typical[dyadic]', 'typical[mt(3)]',
                           'typical_monotone[dyadic]', 'typical_monotone[mt(3)]'}
    assert all(checks.values())
