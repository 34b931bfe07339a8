import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import fractional_matrix_power

from fastrenyi.exact import eigen_spectrum, exact_entropy
from fastrenyi.lanczos import (
    lanczos_entropy,
    lanczos_factorize,
    lanczos_forms,
    lanczos_steps,
    tridiag_alpha_first_column,
)
from fastrenyi.poly import chebyshev_entropy
from fastrenyi.sketch import EstimatorConfig, sample_sketch

from helpers import mixture_gram, mre, random_gram


def test_diagonal_with_coordinate_start_breaks_down():
    g = np.diag([0.4, 0.3, 0.2, 0.1])
    f = lanczos_factorize(g, np.eye(4)[0], 3)
    assert f.steps == 1 and f.breakdown
    np.testing.assert_allclose(f.T, [[0.4]])


def test_full_lanczos_reproduces_spectrum():
    g = random_gram(32, 1, d=6)
    f = lanczos_factorize(g, np.random.default_rng(0).standard_normal(32), 32)
    ritz = np.sort(np.linalg.eigvalsh(f.T))[::-1]
    np.testing.assert_allclose(ritz, eigen_spectrum(g)[: f.steps], atol=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.integers(10, 64), st.integers(1, 10), st.integers(0, 10**6))
def test_factorization_invariants(n, m, seed):
    g = random_gram(n, seed, d=5)
    f = lanczos_factorize(g, sample_sketch(n, 1, "rademacher", seed).vectors[:, 0], m)
    q = f.Q
    assert np.abs(q.T @ q - np.eye(f.steps)).max() <= 1e-8
    # G Q - Q T is confined to the last column (the residual direction)
    resid = g @ q - q @ f.T
    assert np.linalg.norm(resid[:, :-1]) <= 1e-10
    assert abs(np.linalg.norm(resid[:, -1]) - f.residual) <= 1e-10
    lam = eigen_spectrum(g)
    ritz = np.linalg.eigvalsh(f.T)
    assert ritz.min() >= lam[-1] - 1e-8 and ritz.max() <= lam[0] + 1e-8


def test_orthonormality_n64_m8():
    g = random_gram(64, 2)
    f = lanczos_factorize(g, np.ones(64), 8)
    assert np.abs(f.Q.T @ f.Q - np.eye(8)).max() <= 1e-8


def test_tridiag_first_column_examples():
    d = np.array([0.5, 0.2, 0.1])
    np.testing.assert_allclose(tridiag_alpha_first_column(d, np.zeros(2), 1.5), [0.5**1.5, 0, 0], atol=1e-15)
    diag, off = np.array([0.6, 0.5, 0.4]), np.array([0.1, 0.05])
    t = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    np.testing.assert_allclose(tridiag_alpha_first_column(diag, off, 1.0), t[:, 0], atol=1e-12)
    brute = fractional_matrix_power(t, 2.7)[:, 0].real
    np.testing.assert_allclose(tridiag_alpha_first_column(diag, off, 2.7), brute, atol=1e-10)


def test_identity_is_exact():
    n = 64
    est = lanczos_entropy(np.eye(n) / n, EstimatorConfig(alpha=0.5, s=5, m=10, seed=0))
    assert est.value == pytest.approx(6.0, abs=1e-10)


def test_full_steps_equal_per_vector_quadratic_forms():
    n = 24
    g = random_gram(n, 5, d=6)
    x = sample_sketch(n, 6, "rademacher", 3).vectors
    lam, v = np.linalg.eigh(g)
    dense = v @ np.diag(np.clip(lam, 0, None) ** 1.5) @ v.T
    forms = math.sqrt(n) * lanczos_forms(g, x, n, 1.5)
    np.testing.assert_allclose(forms, np.einsum("ij,ij->j", x, dense @ x), rtol=1e-8, atol=1e-12)


def test_lanczos_steps_examples():
    assert lanczos_steps(0.1, 0.5, 4) == 2
    assert lanczos_steps(0.01, 2.0, 100) == math.ceil(2.5 * math.log(100**2.5 / 0.01))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 0.5), st.floats(0.2, 4), st.floats(1.5, 1e5), st.floats(1.0, 10.0))
def test_lanczos_steps_monotone(eps, alpha, kappa, factor):
    m = lanczos_steps(eps, alpha, kappa)
    assert lanczos_steps(eps, alpha, kappa * factor) >= m
    assert lanczos_steps(eps / factor, alpha, kappa) >= m


def test_deterministic():
    g = random_gram(40, 0)
    cfg = EstimatorConfig(alpha=2.5, s=10, m=8, seed=2)
    assert lanczos_entropy(g, cfg).value == lanczos_entropy(g, cfg).value


def test_more_steps_do_not_hurt():
    g = random_gram(96, 4, d=6, sigma=1.5)
    exact = exact_entropy(g, 0.5)
    errs = []
    for m in (2, 4, 8, 16):
        vals = [lanczos_entropy(g, EstimatorConfig(alpha=0.5, s=20, m=m, seed=s)).value for s in range(100)]
        errs.append(mre(vals, exact))
    noise = mre([lanczos_entropy(g, EstimatorConfig(alpha=0.5, s=20, m=96, seed=s)).value for s in range(100)], exact)
    for a, b in zip(errs, errs[1:]):
        assert b <= a + noise


@pytest.fixture(scope="module")
def gram256():
    return mixture_gram(256)


def test_lanczos_mre_n256(gram256):
    exact = exact_entropy(gram256, 1.5)
    values = [lanczos_entropy(gram256, EstimatorConfig(alpha=1.5, s=100, m=15, seed=s)).value for s in range(100)]
    assert mre(values, exact) <= 1e-2


def test_lanczos_beats_chebyshev_at_equal_work():
    g = mixture_gram(256, sigma=2.0)
    lam = eigen_spectrum(g)
    assert lam[0] / lam[-1] >= 100
    exact = exact_entropy(g, 0.5)
    lz, ch = [], []
    for s in range(100):
        cfg = EstimatorConfig(alpha=0.5, s=50, m=15, seed=s)
        lz.append(lanczos_entropy(g, cfg).value)
        ch.append(chebyshev_entropy(g, cfg).value)
    assert mre(lz, exact) <= mre(ch, exact)
