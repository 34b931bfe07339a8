import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fastrenyi.kernels import KernelSpec, build_gram, hadamard_joint, kernel_value, load_csv

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


def sample_sets(max_n=64, max_d=4):
    return st.integers(2, max_n).flatmap(
        lambda n: st.integers(1, max_d).flatmap(lambda d: arrays(np.float64, (n, d), elements=finite))
    )


def test_kernel_value_examples():
    assert kernel_value([0.3, -1.2], [0.3, -1.2], KernelSpec.gaussian(1.0)) == 1.0
    assert kernel_value([0.0], [2.0], KernelSpec.gaussian(1.0)) == pytest.approx(math.exp(-2.0), rel=1e-15)
    assert kernel_value([1, 0], [0, 1], KernelSpec.polynomial(r=1, p=2)) == 1.0


def test_kernel_spec_validation():
    with pytest.raises(ValueError):
        KernelSpec.gaussian(0.0)
    with pytest.raises(ValueError):
        KernelSpec.polynomial(p=0)
    with pytest.raises(ValueError):
        KernelSpec("laplace")
    with pytest.raises(ValueError):
        kernel_value([1.0], [1.0, 2.0], KernelSpec())
    with pytest.raises(ValueError):
        kernel_value([np.nan], [1.0], KernelSpec())


def test_identical_samples_give_constant_gram():
    g = build_gram(np.ones((3, 2)), KernelSpec.gaussian(1.0))
    np.testing.assert_array_equal(g, np.full((3, 3), 1 / 3))


def test_two_point_gram():
    g = build_gram(np.array([[0.0], [2.0]]), KernelSpec.gaussian(1.0))
    assert g[0, 0] == g[1, 1] == 0.5
    assert g[0, 1] == pytest.approx(0.0676676416183064, rel=1e-12)  # 0.5 * exp(-2)


def test_gram_is_read_only():
    g = build_gram(np.arange(6.0).reshape(3, 2))
    with pytest.raises(ValueError):
        g[0, 0] = 1.0


def test_polynomial_gram_normalizes_with_explicit_diagonal():
    x = np.array([[1.0, 2.0], [0.0, 1.0], [3.0, -1.0]])
    g = build_gram(x, KernelSpec.polynomial(r=1.0, p=2))
    k = (x @ x.T + 1.0) ** 2
    expected = k / np.sqrt(np.outer(np.diag(k), np.diag(k))) / 3
    np.testing.assert_allclose(g, expected, rtol=1e-14)
    assert np.all(np.diag(g) == 1 / 3)


def test_invalid_inputs_rejected():
    with pytest.raises(ValueError):
        build_gram(np.ones((1, 2)))
    with pytest.raises(ValueError):
        build_gram(np.array([[1.0], [np.inf]]))
    with pytest.raises(ValueError):
        # zero vector with r=0 gives K_ii = 0
        build_gram(np.array([[0.0], [1.0]]), KernelSpec.polynomial(r=0.0, p=2))


@settings(max_examples=200, deadline=None)
@given(sample_sets(), st.floats(0.1, 10))
def test_gram_invariants(x, sigma):
    g = build_gram(x, KernelSpec.gaussian(sigma))
    n = len(x)
    assert np.all(np.diag(g) == 1.0 / n)
    assert abs(np.trace(g) - 1.0) <= 1e-12
    assert np.array_equal(g, g.T)
    assert np.linalg.eigvalsh(g).min() >= -1e-10


@settings(max_examples=100, deadline=None)
@given(sample_sets(max_n=16), st.floats(0.1, 5), st.floats(1.0, 3.0))
def test_gaussian_entries_monotone_in_sigma(x, sigma, factor):
    small = build_gram(x, KernelSpec.gaussian(sigma))
    large = build_gram(x, KernelSpec.gaussian(sigma * factor))
    assert np.all(large >= small)


def test_hadamard_joint_examples():
    eye = np.eye(5) / 5
    np.testing.assert_array_equal(hadamard_joint([eye, eye]), eye)

    g1 = build_gram(np.array([[0.0], [2.0]]))
    g2 = build_gram(np.array([[0.0], [1.0]]))
    joint = hadamard_joint([g1, g2])
    # entrywise product: diag 1/4, off-diag 0.25*exp(-2.5); trace 1/2 -> rescale by 2
    assert joint[0, 0] == 0.5
    assert joint[0, 1] == pytest.approx(0.5 * math.exp(-2.5), rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 12), st.integers(2, 5), st.randoms(use_true_random=False))
def test_hadamard_joint_permutation_invariant(n, count, rnd):
    rng = np.random.default_rng(rnd.randint(0, 2**32 - 1))
    grams = [build_gram(rng.standard_normal((n, 2)), KernelSpec.gaussian(rng.uniform(0.3, 3))) for _ in range(count)]
    ref = hadamard_joint(grams)
    order = list(range(count))
    rnd.shuffle(order)
    assert np.array_equal(hadamard_joint([grams[i] for i in order]), ref)
    assert np.all(np.diag(ref) == 1.0 / n)


def test_hadamard_joint_shape_mismatch():
    with pytest.raises(ValueError):
        hadamard_joint([np.eye(2) / 2, np.eye(3) / 3])


def test_load_csv_with_and_without_header(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("x,y\n1,2\n3,4\n", encoding="utf-8")
    np.testing.assert_array_equal(load_csv(p), [[1, 2], [3, 4]])
    q = tmp_path / "b.csv"
    q.write_text("1.5\n-2\n", encoding="utf-8")
    np.testing.assert_array_equal(load_csv(q), [[1.5], [-2.0]])
