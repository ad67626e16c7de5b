import fractions
import math

import pytest

from kakeyalabpy import entropy as ent
from kakeyalabpy import exceptions as exc
from kakeyalabpy import pipeline
from kakeyalabpy import _fp_lib as fp

F = fractions.Fraction


def _uniform(p):
    return ent.JointRV.uniform([((x,), (y,)) for x in range(p) for y in range(p)],
                               'Fp', p, 1)


def _two_atoms():
    return ent.JointRV({((0,), (1,)): F(1, 2), ((1,), (0,)): F(1, 2)}, 'Fp', 3, 1)


def test_multinomial():
    assert pipeline.multinomial([2, 2]) == 6
    assert pipeline.multinomial([1, 1, 1]) == 6
    assert pipeline.law_denominator(_two_atoms()) == 2


def test_typical_pair_set_sizes():
    J = _two_atoms()
    B = pipeline.typical_pair_set(J, 2)
    assert B.n == 4
    assert len(B) == 6
    for r in [0, 1, None]:
        want = pipeline.expected_projection_size(J, 'inf' if r is None else r, 2)
        assert len(B.project(r)) == want


def test_support_pair_set():
    J = _uniform(3)
    B = pipeline.support_pair_set(J, 2)
    assert len(B) == 81
    assert len(B.project(1)) == pipeline.expected_projection_size(J, 1, 2, 'support')


def test_pair_set_cap():
    with pytest.raises(exc.InstanceTooLarge):
        pipeline.support_pair_set(_uniform(3), 3, cap=100)


def test_pair_set_needs_field_law():
    J = ent.JointRV.uniform([(0, 1), (1, 0)])
    with pytest.raises(exc.PreconditionError):
        pipeline.typical_pair_set(J, 1)


def test_lines_union():
    B = fp.FpPairSet(3, 2, [((0, 0), (1, 0)), ((1, 1), (1, 1))])
    A, D = pipeline.lines_union(B)
    assert A == fp.FpSet(3, 2, [(0, 0), (1, 0), (2, 0), (1, 1)])
    assert D == {(2, 0)}


def test_replay_uniform_law():
    report = pipeline.replay_theorem13(3, _uniform(3), mode='support')
    assert report['entropy']['gap_ratio'] == pytest.approx(1.0)
    assert report['lines'] == {'size': 3, 'directions': 2}
    assert report['final']['n'] == 1
    assert report['final']['size'] == 3
    assert report['ok']


def test_replay_point_mass_is_degenerate():
    J = ent.JointRV({((0,), (0,)): 1}, 'Fp', 5, 1)
    report = pipeline.replay_theorem13(5, J)
    assert report['final']['degenerate']
    assert report['compress'] is None
    assert report['ok']


@pytest.mark.parametrize('p', [3, 5])
def test_replay_mt(p):
    report = pipeline.replay_theorem13(p, 'mt', seed=1)
    assert report['mode'] == 'support'
    assert report['entropy']['gap_ratio'] > 1
    assert report['final']['besicovitch']
    assert report['final']['size'] >= (p / 2)**report['final']['n']
    assert report['final']['reference_exponent'] == pytest.approx(1 - math.log(2) / math.log(p))


def test_replay_typical_two_atoms():
    report = pipeline.replay_theorem13(3, _two_atoms(), m=1, mode='typical')
    assert report['pairs']['dimension'] == 2
    assert report['pairs']['size'] == 2
    assert report['ok']


def test_replay_dimension_cap():
    with pytest.raises(exc.InstanceTooLarge):
        pipeline.replay_theorem13(3, _two_atoms(), m=4, mode='typical', max_dim=4)


def test_replay_law_over_other_field():
    with pytest.raises(exc.PreconditionError):
        pipeline.replay_theorem13(5, _uniform(3))


def test_replay_sweep():
    rows = pipeline.replay_sweep(3, _two_atoms(), ms=(1, 2), mode='typical')
    assert [r['m'] for r in rows] == [1, 2]
    assert all(r['ok'] for r in rows)
