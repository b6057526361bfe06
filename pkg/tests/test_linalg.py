import math

import numpy as np
import pytest

from sparselab import (
    inner,
    least_squares_on_support,
    lq_norm,
    nullspace,
    row_echelon_rank,
    symmetric_eigenvalues,
)


def test_lq_norm_values():
    v = [3.0, -4.0, 0.0]
    assert lq_norm(v, 1) == 7.0
    assert lq_norm(v, 2) == 5.0
    assert lq_norm(v, math.inf) == 4.0
    assert lq_norm([], 2) == 0.0


def test_lq_norm_rejects_matrices():
    with pytest.raises(ValueError):
        lq_norm(np.eye(2), 2)


def test_inner():
    assert inner([1.0, 2.0], [3.0, -1.0]) == 1.0


def test_row_echelon_rank():
    assert row_echelon_rank(np.eye(4)) == 4
    assert row_echelon_rank(np.zeros((3, 5))) == 0
    outer = np.outer([1.0, 2.0, 3.0], [4.0, 5.0])
    assert row_echelon_rank(outer) == 1
    # rank is insensitive to a huge common scale
    assert row_echelon_rank(1e12 * outer) == 1


def test_nullspace_duplicate_column():
    # third column = 2 * first, so the kernel is spanned by (-2, 0, 1)
    X = np.array([[1.0, 0.0, 2.0], [0.0, 1.0, 0.0]])
    ns = nullspace(X)
    assert ns.dim == 1
    np.testing.assert_allclose(ns.basis[0], [-2.0, 0.0, 1.0], atol=1e-12)


def test_nullspace_full_rank_has_no_basis_matrix():
    ns = nullspace(np.eye(3))
    assert ns.dim == 0
    with pytest.raises(ValueError):
        ns.matrix()


def test_nullspace_vectors_annihilate(inst25):
    ns = nullspace(inst25.X)
    assert ns.dim == 1
    z = ns.basis[0]
    assert z[-1] == 1.0
    assert lq_norm(inst25.X @ z, 2) <= 1e-10 * lq_norm(z, 2) * np.max(np.abs(inst25.X))
    # the construction ships the same ray in integer form
    np.testing.assert_allclose(z, inst25.z, atol=1e-12)


def test_least_squares_orthogonality():
    rng = np.random.default_rng(7)
    X = rng.standard_normal((12, 6))
    Y = rng.standard_normal(12)
    support = (0, 2, 5)
    fit = least_squares_on_support(X, Y, support)
    resid = Y - X[:, list(support)] @ fit.coeffs
    # normal equations: the residual is orthogonal to every kept column
    assert np.max(np.abs(X[:, list(support)].T @ resid)) <= 1e-9
    assert fit.residual_norm == pytest.approx(lq_norm(resid, 2), rel=1e-12)
    assert not fit.rank_deficient


def test_least_squares_empty_support():
    Y = np.array([3.0, 4.0])
    fit = least_squares_on_support(np.eye(2), Y, ())
    assert fit.coeffs.size == 0
    assert fit.residual_norm == 5.0
    assert not fit.rank_deficient


def test_least_squares_rank_deficient_flag():
    X = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
    fit = least_squares_on_support(X, X @ np.array([1.0, 1.0]), (0, 1))
    assert fit.rank_deficient
    assert fit.residual_norm <= 1e-9


def test_symmetric_eigenvalues_2x2_closed_form():
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(symmetric_eigenvalues(A), [1.0, 3.0], atol=1e-12)


def test_symmetric_eigenvalues_match_numpy():
    rng = np.random.default_rng(11)
    for m in (1, 2, 5, 9):
        B = rng.standard_normal((m, m))
        A = B + B.T
        mine = symmetric_eigenvalues(A)
        ref = np.linalg.eigvalsh(A)
        np.testing.assert_allclose(mine, ref, atol=1e-9 * max(1.0, np.max(np.abs(ref))))


def test_symmetric_eigenvalues_gram_nonnegative():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((8, 5))
    eigs = symmetric_eigenvalues(X.T @ X)
    assert np.min(eigs) >= -1e-10


def test_symmetric_eigenvalues_rejects_asymmetric():
    with pytest.raises(ValueError):
        symmetric_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))
