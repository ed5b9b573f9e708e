from fractions import Fraction

import numpy as np
import pytest

from conftest import brute_partial_sums, random_function
from vilenkin.operators import (OperatorFamily, deviation, distribution, exceptional_set,
                                maximal, partial_sum)
from vilenkin.radix import RadixError, make_radix_sequence
from vilenkin.system import LevelFunction, dirichlet_kernel
from vilenkin.transform import convolve


def test_partial_sums_match_brute(backend, small_R, rng):
    R = small_R
    f = LevelFunction(R, random_function(rng, R.size))
    ref = brute_partial_sums(R, f.values)
    for j in range(1, R.size + 1):
        assert np.allclose(partial_sum(f, j).values, ref[j - 1], atol=1e-12)


def test_maximal_matches_brute(backend, small_R, rng):
    R = small_R
    f = random_function(rng, R.size)
    ref = brute_partial_sums(R, f)
    J = [1, R.size // 2 or 1, R.size]
    fam = OperatorFamily.partial_sums(R, J)
    assert np.allclose(fam.maximal_array(f)[0],
                       np.abs(ref[[j - 1 for j in J]]).max(axis=0), atol=1e-12)
    dev = deviation(LevelFunction(R, f), J)
    assert np.allclose(dev, np.abs(ref[[j - 1 for j in J]] - f).max(axis=0), atol=1e-12)


def test_kernel_vs_truncation(backend, rng):
    R = make_radix_sequence([2, 3, 2, 3])
    f = LevelFunction(R, random_function(rng, R.size))
    for j in (1, 5, 17, 36):
        assert np.abs(convolve(f, dirichlet_kernel(R, j)).values
                      - partial_sum(f, j).values).max() < 1e-10


def test_convolution_family_equals_partial_sums(backend, rng):
    R = make_radix_sequence([3, 2, 2])
    f = random_function(rng, R.size)
    J = [2, 5, 9]
    a = OperatorFamily.convolutions([dirichlet_kernel(R, j) for j in J]).maximal_array(f)
    b = OperatorFamily.partial_sums(R, J).maximal_array(f)
    assert np.allclose(a, b, atol=1e-12)


def test_martingale_idempotent(rng):
    R = make_radix_sequence([2, 3, 2])
    f = LevelFunction(R, random_function(rng, R.size))
    for Mk in R.block_sizes[1:]:
        once = partial_sum(f, Mk)
        assert np.allclose(partial_sum(once, Mk).values, once.values, atol=1e-12)


def test_martingale_is_coset_average(rng):
    R = make_radix_sequence([2, 3, 2])
    f = LevelFunction(R, random_function(rng, R.size))
    for k, Mk in enumerate(R.block_sizes):
        sub = np.flatnonzero(R.subgroup_mask(k))
        expected = np.array([f.values[R.add_indices(sub, x)].mean() for x in range(R.size)])
        assert np.allclose(partial_sum(f, Mk).values, expected, atol=1e-12)


def test_sublinear_and_homogeneous(backend, rng):
    R = make_radix_sequence([2, 2, 3, 2])
    fam = OperatorFamily.partial_sums(R)
    f, g = random_function(rng, R.size), random_function(rng, R.size)
    mf, mg, mfg = (fam.maximal_array(v)[0] for v in (f, g, f + g))
    assert np.all(mfg <= mf + mg + 1e-12)
    c = 2.5 - 1.5j
    assert np.allclose(fam.maximal_array(c * f)[0], abs(c) * mf, atol=1e-12)
    assert np.allclose(fam.scaled(c).maximal_array(f)[0], abs(c) * mf, atol=1e-12)


def test_translation_covariance(backend, rng):
    # S_j commutes with translation, so M(f(. - s))(x) = Mf(x - s)
    R = make_radix_sequence([3, 2, 4])
    fam = OperatorFamily.partial_sums(R, [1, 4, 7, 24])
    f = LevelFunction(R, random_function(rng, R.size))
    for s in (1, 5, 23):
        lhs = fam.maximal_array(f.translate(s).values)[0]
        rhs = fam.maximal_array(f.values)[0][R.sub_indices(np.arange(R.size), s)]
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_identity_family(rng):
    R = make_radix_sequence([2, 3])
    f = random_function(rng, R.size)
    assert np.allclose(OperatorFamily.identity(R, 3.0).maximal_array(f)[0],
                       3 * np.abs(f), atol=1e-12)


def test_maximal_wrapper_checks_radix():
    R, S = make_radix_sequence([2, 3]), make_radix_sequence([3, 2])
    with pytest.raises(RadixError):
        maximal(LevelFunction.constant(R), OperatorFamily.partial_sums(S))


def test_family_validation():
    R = make_radix_sequence([2, 2])
    with pytest.raises(ValueError):
        OperatorFamily.partial_sums(R, [0])
    with pytest.raises(ValueError):
        OperatorFamily.partial_sums(R, [5])
    with pytest.raises(ValueError):
        OperatorFamily.convolutions([])


def test_distribution_exact():
    R = make_radix_sequence([2, 2])
    rep = distribution(np.array([1.0, 3.0, 3.0, 0.5]))
    assert rep.thresholds == (0.5, 1.0, 3.0)
    assert rep.measures == [Fraction(1), Fraction(3, 4), Fraction(1, 2)]
    assert rep.to_csv().to_text().splitlines()[0] == "lambda,measure"
    assert R.size == 4


def test_exceptional_set_brute(backend, rng):
    R = make_radix_sequence([2, 3, 2])
    f = LevelFunction(R, random_function(rng, R.size))
    ref = brute_partial_sums(R, f.values)
    J = [1, 2, 6]
    dev = np.abs(ref[[j - 1 for j in J]] - f.values).max(axis=0)
    for lam in (0.1, 0.5, 1.0, 2.0):
        pts, mu = exceptional_set(f, lam, J)
        assert set(pts) == set(np.flatnonzero(dev > lam))
        assert mu == Fraction(len(pts), R.size)
    pts, mu = exceptional_set(f, 1e-9, [R.size])
    assert mu == 0 and pts.size == 0
    with pytest.raises(ValueError):
        exceptional_set(f, 0.0, J)


def test_constant_function_has_no_exceptional_set():
    R = make_radix_sequence([2] * 6)
    f = LevelFunction.constant(R, 3.0)
    assert np.all(deviation(f, range(1, R.size + 1)) < 1e-12)
