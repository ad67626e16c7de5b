import collections
import fractions
import math

import numpy as np
import pytest
import sympy

from kakeyalabpy import entropy as ent
from kakeyalabpy import exceptions as exc
from kakeyalabpy import sets_base as sb

F = fractions.Fraction


def test_entropy_uniform_and_point():
    d = ent.DiscreteDist.uniform(range(4))
    assert ent.entropy(d) == pytest.approx(math.log(4))
    assert ent.entropy(d, base=2) == pytest.approx(2.0)
    assert ent.entropy(ent.DiscreteDist.point(7)) == 0.0


def test_entropy_exact_weights():
    d = ent.DiscreteDist({0: F(1, 2), 1: F(1, 4), 2: F(1, 4)})
    assert ent.entropy(d) == pytest.approx(1.5 * math.log(2))


def test_discrete_dist_validation():
    with pytest.raises(ValueError):
        ent.DiscreteDist({0: F(1, 2), 1: F(1, 3)})
    with pytest.raises(ValueError):
        ent.DiscreteDist({0: F(3, 2), 1: F(-1, 2)})


def _independent_bits():
    return ent.JointRV.uniform([(x, y) for x in (0, 1) for y in (0, 1)])


def test_projections_of_independent_bits():
    J = _independent_bits()
    diff = ent.difference(J)
    assert diff.mass == {-1: F(1, 4), 0: F(1, 2), 1: F(1, 4)}
    assert ent.projection_entropy(J, 0) == pytest.approx(math.log(2))
    assert ent.projection_entropy(J, sb.INFINITY) == pytest.approx(math.log(2))
    half = ent.rv_projection(J, '1/2')
    assert half.support == {0, F(1, 2), 1, F(3, 2)}


def test_entropy_gap():
    J = _independent_bits()
    ratio, r = ent.entropy_gap(J, [0, 1, sb.INFINITY])
    assert ratio == pytest.approx(1.0)
    assert r == sb.Slope(1)
    with pytest.raises(ValueError):
        ent.entropy_gap(J, [0, -1])


def test_entropy_gap_degenerate():
    J = ent.JointRV.uniform([(0, 0), (1, 1)])
    assert ent.entropy(ent.difference(J)) == 0.0
    ratio, _ = ent.entropy_gap(J, [1])
    assert ratio == 0.0


def test_joint_from_samples_and_marginals():
    J = ent.JointRV.from_samples([(0, 1), (0, 1), (2, 3), (4, 1)])
    assert J.mass[(0, 1)] == F(1, 2)
    assert J.marginal_y().mass == {1: F(3, 4), 3: F(1, 4)}
    assert J.marginal_x().support == {0, 2, 4}


def test_fp_joint_and_residues():
    J = ent.JointRV.uniform([((x,), (y,)) for x in range(3) for y in range(3)],
                            'Fp', p=3, n=1)
    assert ent.fp_residue('1/2', 5) == 3
    assert ent.fp_residue(sb.INFINITY, 5) is None
    with pytest.raises(exc.PreconditionError):
        ent.fp_residue('1/5', 5)
    assert ent.projection_entropy(J, 1) == pytest.approx(math.log(3))
    assert len(ent.fp_slopes(3)) == 3


@pytest.mark.parametrize('p', [3, 5, 7])
def test_mt_joint_closed_forms(p):
    J = ent.mt_joint(p)
    assert ent.entropy(ent.difference(J)) == pytest.approx(ent.mt_difference_entropy(p))
    for r in ent.fp_slopes(p):
        assert ent.projection_entropy(J, r) == pytest.approx(ent.mt_projection_entropy(p))
    assert ent.mt_projection_entropy(p) <= ent.mt_projection_bound(p)


@pytest.mark.parametrize('p,expected', [(5, 1.0873), (13, 1.0986)])
def test_mt_gap_ratio(p, expected):
    ratio, _ = ent.entropy_gap(ent.mt_joint(p), ent.fp_slopes(p))
    assert ratio == pytest.approx(expected, abs=5e-4)
    assert ratio > 1


def test_mt_joint_cap():
    with pytest.raises(exc.InstanceTooLarge):
        ent.mt_joint(11, cap=1000)


def test_multinomial_logcount():
    d = ent.DiscreteDist({0: F(1, 2), 1: F(1, 2)})
    assert ent.multinomial_logcount(d, 4) == pytest.approx(math.log(6) / 4)
    with pytest.raises(exc.PreconditionError):
        ent.multinomial_logcount(d, 3)


@pytest.mark.parametrize('n', [4, 16, 64])
def test_typical_logcount_gap(n):
    d = ent.DiscreteDist({0: F(1, 2), 1: F(1, 4), 2: F(1, 4)})
    tc = ent.typical_logcount(d, None, n)
    assert 0 <= tc.gap <= tc.stirling_bound
    assert tc.entropy == pytest.approx(1.5 * math.log(2))


def test_typical_logcount_from_joint():
    tc = ent.typical_logcount(_independent_bits(), -1, 8)
    assert tc.logcount < tc.entropy


def test_minimal_parameters():
    assert ent.minimal_Q([sb.Slope(1)]) == 2
    assert ent.minimal_M([sb.INFINITY]) == 2
    assert ent.minimal_M([sb.Slope(1)]) == 1
    assert ent.minimal_Q([sb.Slope(2)]) == 3


def test_cover_to_rv_example():
    A = sb.IntSet([0, 1, 2, 3, 4, 6])
    J = ent.cover_to_rv(A, 2, [1], Q=2, M=1)
    assert J.atoms == [((2, 4), F(1, 2)), ((4, 8), F(1, 2))]
    assert ent.entropy(ent.difference(J)) == pytest.approx(math.log(2))


def test_cover_to_rv_rejects_bad_parameters():
    A = sb.IntSet([0, 1, 2, 3, 4, 6])
    with pytest.raises(exc.PreconditionError):
        ent.cover_to_rv(A, 2, [-1], Q=2, M=1)
    with pytest.raises(exc.PreconditionError) as info:
        ent.cover_to_rv(A, 2, [1], Q=1, M=1)
    assert info.value.min_Q == 2


def test_katz_tao_epsilon():
    eps = ent.katz_tao_epsilon()
    assert eps == pytest.approx(0.67513, abs=1e-4)
    assert ent.katz_tao_polynomial(1 + eps) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize('p', [int(p) for p in sympy.primerange(5, 32)])
def test_mt_gap_ratio_lower_bound(p):
    J = ent.mt_joint(p)
    h = ent.entropy(ent.difference(J))
    assert h == pytest.approx(ent.mt_difference_entropy(p), abs=1e-9)
    ratio, _ = ent.entropy_gap(J, ent.fp_slopes(p))
    assert ratio >= 1 + 0.1 / math.log(p)
    assert h / ratio <= ent.mt_projection_bound(p) + 1e-9


def _random_law(rng):
    atoms = int(rng.integers(1, 7))
    mass = collections.Counter()
    for _ in range(atoms):
        x, y, w = rng.integers(-4, 5), rng.integers(-4, 5), rng.integers(1, 10)
        mass[(int(x), int(y))] += int(w)
    total = sum(mass.values())
    return ent.JointRV({xy: F(c, total) for xy, c in mass.items()})


def test_difference_entropy_is_subadditive():
    rng = np.random.default_rng(11)
    for _ in range(500):
        J = _random_law(rng)
        h = ent.entropy(ent.difference(J))
        assert h <= ent.entropy(J.marginal_x()) + ent.entropy(J.marginal_y()) + 1e-12


def test_subadditivity_is_tight_for_independent_injective_difference():
    J = ent.JointRV.uniform([(x, y) for x in (0, 10) for y in (0, 1)])
    h = ent.entropy(ent.difference(J))
    assert h == pytest.approx(ent.entropy(J.marginal_x()) + ent.entropy(J.marginal_y()))


def test_entropy_at_most_log_support():
    rng = np.random.default_rng(5)
    for _ in range(500):
        weights = rng.integers(1, 10, size=int(rng.integers(1, 8))).tolist()
        total = sum(weights)
        d = ent.DiscreteDist({i: F(w, total) for i, w in enumerate(weights)})
        h = ent.entropy(d)
        if len(set(weights)) == 1:
            assert h == pytest.approx(math.log(len(d)), abs=1e-12)
        else:
            assert h < math.log(len(d)) - 1e-12


def test_typical_fair_coin():
    d = ent.DiscreteDist({0: F(1, 2), 1: F(1, 2)})
    assert ent.multinomial_logcount(d, 2**10) == pytest.approx(math.log(2), abs=0.01)


def test_typical_logcount_mt_difference_law():
    law = ent.difference(ent.mt_joint(3))
    counts = [ent.typical_logcount(law, None, 9 * 2**j) for j in range(9)]
    for tc in counts:
        assert 0 <= tc.gap <= tc.stirling_bound
    assert all(b.gap < a.gap for a, b in zip(counts, counts[1:]))
