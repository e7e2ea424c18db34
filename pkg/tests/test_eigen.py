import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specdist.eigen import EigensolverError, symmetric_eigvals, tridiagonal_ql, tridiagonalize


def random_symmetric(n, seed):
    a = np.random.default_rng(seed).normal(size=(n, n))
    return (a + a.T) / 2


@pytest.mark.parametrize("n", [1, 2, 3, 10, 57])
def test_tridiagonal_form_is_similar(n):
    a = random_symmetric(n, n)
    d, e = tridiagonalize(a)
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.allclose(np.linalg.eigvalsh(t), np.linalg.eigvalsh(a), atol=1e-10)


@given(st.integers(1, 40), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_matches_lapack(n, seed):
    a = random_symmetric(n, seed)
    assert np.allclose(symmetric_eigvals(a), np.linalg.eigvalsh(a), atol=1e-10)


def test_known_tridiagonal():
    # second-difference matrix: eigenvalues 2 - 2 cos(k pi / (n + 1))
    n = 30
    vals = tridiagonal_ql(np.full(n, 2.0), np.full(n - 1, -1.0))
    k = np.arange(1, n + 1)
    assert np.allclose(vals, np.sort(2 - 2 * np.cos(k * np.pi / (n + 1))), atol=1e-12)


def test_repeated_eigenvalues():
    a = np.ones((6, 6)) - np.eye(6)
    assert np.allclose(symmetric_eigvals(a), [-1, -1, -1, -1, -1, 5], atol=1e-12)


def test_already_diagonal():
    assert np.array_equal(tridiagonal_ql([3.0, 1.0, 2.0], [0.0, 0.0]), [1.0, 2.0, 3.0])


def test_empty():
    assert symmetric_eigvals(np.zeros((0, 0))).size == 0


def test_iteration_cap_is_reported():
    with pytest.raises(EigensolverError, match="did not converge"):
        tridiagonal_ql([1.0, 2.0, 3.0], [0.5, 0.5], max_iter=0)


def test_rejects_non_square():
    with pytest.raises(ValueError):
        tridiagonalize(np.zeros((2, 3)))
