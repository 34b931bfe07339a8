import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fastrenyi.errors import NotPSDError
from fastrenyi.exact import (
    check_alpha,
    eigen_spectrum,
    exact_entropy,
    exact_joint_entropy,
    exact_mutual_information,
    exact_total_correlation,
)
from fastrenyi.kernels import KernelSpec, build_gram, hadamard_joint

from helpers import random_gram

ALPHA_GRID = (0.5, 0.8, 1.2, 2, 3, 5, 8)


def test_spectrum_examples():
    np.testing.assert_allclose(eigen_spectrum(np.eye(4) / 4), [0.25] * 4, atol=1e-15)
    lam = eigen_spectrum(build_gram(np.zeros((5, 2))))
    np.testing.assert_allclose(lam, [1, 0, 0, 0, 0], atol=1e-12)
    lam = eigen_spectrum(build_gram(np.array([[0.0], [2.0]])))
    np.testing.assert_allclose(lam, [0.5 + 0.0676676416183064, 0.5 - 0.0676676416183064], atol=1e-12)


def test_spectrum_sorted_and_sums_to_one():
    lam = eigen_spectrum(random_gram(40, 3))
    assert np.all(np.diff(lam) <= 0)
    assert abs(lam.sum() - 1) <= 1e-8
    assert lam.min() >= 0


def test_not_psd_rejected():
    with pytest.raises(NotPSDError):
        eigen_spectrum(np.array([[0.5, 0.6], [0.6, 0.5]]))


@pytest.mark.parametrize("alpha", ALPHA_GRID)
def test_entropy_examples(alpha):
    assert exact_entropy(np.eye(16) / 16, alpha) == pytest.approx(4.0, abs=1e-12)
    assert exact_entropy(build_gram(np.ones((4, 1))), alpha) == pytest.approx(0.0, abs=1e-12)


def test_two_eigenvalue_entropy():
    g = np.diag([0.75, 0.25])
    assert exact_entropy(g, 2) == pytest.approx(-math.log2(0.625), rel=1e-14)
    assert exact_entropy(g, 2) == pytest.approx(0.678071905112638, rel=1e-12)


@pytest.mark.parametrize("alpha", [1.0, 1 + 5e-7, 1 - 5e-7, 0.0, -1.0, math.nan])
def test_alpha_near_one_rejected(alpha):
    with pytest.raises(ValueError):
        check_alpha(alpha)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(0, 10**6), st.floats(0.2, 5))
def test_entropy_properties(n, seed, sigma):
    g = random_gram(n, seed, sigma=sigma)
    values = [exact_entropy(g, a) for a in ALPHA_GRID]
    assert all(b <= a + 1e-10 for a, b in zip(values, values[1:]))
    assert all(-1e-10 <= v <= math.log2(n) + 1e-10 for v in values)
    perm = np.random.default_rng(seed).permutation(n)
    assert exact_entropy(g[np.ix_(perm, perm)], 2.0) == pytest.approx(values[3], abs=1e-10)


def test_mutual_information_identities():
    eye = np.eye(8) / 8
    assert exact_mutual_information(eye, eye, 2.0) == pytest.approx(3.0, abs=1e-12)
    g = random_gram(20, 1)
    h = random_gram(20, 2)
    expected = 2 * exact_entropy(g, 1.5) - exact_entropy(hadamard_joint([g, g]), 1.5)
    assert exact_mutual_information(g, g, 1.5) == pytest.approx(expected, abs=1e-12)
    assert exact_total_correlation([g, h], 2.0) == pytest.approx(exact_mutual_information(g, h, 2.0), abs=1e-12)
    assert exact_mutual_information(g, h, 2.0) == pytest.approx(exact_mutual_information(h, g, 2.0), abs=1e-12)


def test_joint_entropy_matches_brute_force():
    g = random_gram(32, 11)
    h = random_gram(32, 12, d=2)
    prod = g * h
    lam = np.linalg.eigvalsh(prod / np.trace(prod))
    brute = math.log2(np.sum(np.clip(lam, 0, None) ** 2)) / (1 - 2)
    assert exact_joint_entropy([g, h], 2.0) == pytest.approx(brute, abs=1e-10)
    mi = exact_entropy(g, 2) + exact_entropy(h, 2) - brute
    assert exact_mutual_information(g, h, 2.0) == pytest.approx(mi, abs=1e-10)


def test_mutual_information_nonnegative():
    rng = np.random.default_rng(5)
    for _ in range(20):
        x = rng.standard_normal((64, 2))
        y = x[:, :1] + rng.standard_normal((64, 1)) * rng.uniform(0.1, 3)
        assert exact_mutual_information(build_gram(x), build_gram(y), 2.0) >= -1e-10


def test_total_correlation_of_duplicates():
    g = random_gram(16, 4)
    expected = 2 * exact_entropy(g, 2.0) - exact_entropy(hadamard_joint([g, g]), 2.0)
    assert exact_total_correlation([g, g], 2.0) == pytest.approx(expected, abs=1e-12)
