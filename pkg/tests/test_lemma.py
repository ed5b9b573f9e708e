from fractions import Fraction

import numpy as np
import pytest

from vilenkin.battery import BATTERY_VERSION, battery, nonnegative_battery, random_nonnegative
from vilenkin.lemma import (LevelSequenceExhausted, choose_cutoff, default_levels,
                            digit_reversed_order, lemma1_construct, mass_match, tail_bound)
from vilenkin.radix import make_radix_sequence
from vilenkin.system import dirichlet_kernel


@pytest.fixture
def dyadic6():
    R = make_radix_sequence([2] * 6)
    return R, [dirichlet_kernel(R, j) for j in (1, 2, 4, 8)]


def test_digit_reversed_cosets_are_contiguous():
    R = make_radix_sequence([2, 3, 2, 2])
    order = digit_reversed_order(R)
    assert sorted(order) == list(range(R.size))
    for k in range(R.length + 1):
        sub = set(np.flatnonzero(R.subgroup_mask(k)))
        for s in range(R.size):
            coset = {int(v) for v in R.add_indices(np.array(sorted(sub)), s)}
            pos = sorted(int(np.flatnonzero(order == x)[0]) for x in coset)
            assert pos[-1] - pos[0] == len(pos) - 1


def test_default_levels():
    lv = default_levels(np.array([0.0, 0.3, 1.0, 5.0]))
    assert lv[0] == 0 and lv[1] == 0.3
    assert np.allclose(lv[2:] / lv[1:-1], 2.0)
    assert lv[-1] > 5.0 and lv[-2] <= 5.0


def test_mass_match_residual_exact():
    rng = np.random.default_rng(1)
    f = rng.random(64) * 4
    band = (f > 1) & (f <= 2)
    mask, res = mass_match(f, band, 2.0)
    assert not np.any(mask & ~band)
    total = sum(Fraction(float(v)) for v in f[band]) / 64
    assert res == total - Fraction(2) * int(mask.sum()) / 64
    assert 0 <= res < Fraction(2, 64)


def test_cutoff(dyadic6):
    R, kernels = dyadic6
    f = np.abs(np.random.default_rng(2).normal(size=R.size))
    levels = default_levels(f)
    nu, a = choose_cutoff(f, kernels, 0.1, levels)
    assert tail_bound(f, a, kernels) < 0.05
    if nu > 1:
        assert tail_bound(f, levels[nu - 1], kernels) >= 0.05
    with pytest.raises(LevelSequenceExhausted):
        choose_cutoff(f, kernels, 0.1, [0.0, 1e-6])
    with pytest.raises(ValueError):
        choose_cutoff(f, kernels, 0.1, [1.0, 2.0])


def test_construct_on_battery(dyadic6):
    R, kernels = dyadic6
    for fid, f in nonnegative_battery(R, seed=0):
        dec = lemma1_construct(f, kernels, 0.1, R=R)
        for n, res in enumerate(dec.residuals, start=1):
            assert 0 <= res < Fraction(dec.levels[n]) / R.size, fid
        assert dec.passed, fid
        assert dec.measured_integral <= dec.chain_bound + 1e-12
        assert set(dec.report()) >= {"nu", "levels", "residuals", "measured_integral",
                                     "epsilon", "slack", "pass"}


def test_construct_random_bounds(dyadic6):
    # the eps + slack criterion is not guaranteed off the battery; the
    # residual bound and the L1 chain bound are
    R, kernels = dyadic6
    for fid, f in random_nonnegative(R, seed=3, count=6):
        dec = lemma1_construct(f, kernels, 0.1, R=R)
        for n, res in enumerate(dec.residuals, start=1):
            assert 0 <= res < Fraction(dec.levels[n]) / R.size, fid
        assert dec.measured_integral <= dec.chain_bound + 1e-12


def test_construct_rejects_bad_input(dyadic6):
    R, kernels = dyadic6
    with pytest.raises(ValueError):
        lemma1_construct(-np.ones(R.size), kernels, 0.1, R=R)
    with pytest.raises(ValueError):
        lemma1_construct(np.ones(R.size), kernels, 0.0, R=R)


def test_battery_shape_and_determinism():
    R = make_radix_sequence([2, 3, 2, 3])
    a, b = battery(R, 7), battery(R, 7)
    assert BATTERY_VERSION == "v1" and len(a) == 50
    assert [x for x, _ in a] == [x for x, _ in b]
    assert all(np.array_equal(u, v) for (_, u), (_, v) in zip(a, b))
    assert len({fid for fid, _ in a}) == 50


def test_cutoff_examples(dyadic6):
    R, kernels = dyadic6
    f = np.full(R.size, 0.5)
    assert choose_cutoff(f, kernels, 0.1, [0.0, 1.0, 2.0])[0] == 1
    g = np.random.default_rng(8).pareto(1.1, R.size)
    assert choose_cutoff(g, kernels, 1e9, default_levels(g))[0] == 1
    levels = default_levels(g)
    for eps in (1.0, 0.1, 0.01):
        scan = [float(np.mean(np.where(g >= a, g, 0))) * 1 * 4 for a in levels]
        want = next(n for n in range(1, levels.size) if scan[n] < eps / 2)
        assert choose_cutoff(g, kernels, eps, levels)[0] == want


def test_mass_match_examples():
    f = np.array([2.0, 2.0, 0.0, 2.0])
    band = np.array([True, True, False, True])
    mask, res = mass_match(f, band, 2.0)
    assert np.array_equal(mask, band) and res == 0
    single = np.array([False, True, False, False])
    mask, res = mass_match(np.array([0.0, 1.0, 0, 0]), single, 2.0)
    assert not mask.any() and res == Fraction(1, 4)
