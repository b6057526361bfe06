"""Dense linear algebra kernels shared by the recovery experiments.

Everything operates on float64 numpy arrays and is sized for small, dense
problems where deterministic, inspectable behaviour matters more than raw
speed: nullspaces come from row reduction with partial pivoting, least
squares goes through the normal equations, and symmetric eigenvalues are
computed with cyclic Jacobi rotations.  numpy's own factorizations are used
in the test suite as independent cross-checks, not here.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

# Rank decisions are made relative to the largest absolute entry of the
# matrix being examined.
DEFAULT_RANK_TOL = 1e-10

# Jacobi sweeps stop once the off-diagonal Frobenius mass is below this
# fraction of ||A||_F.
_JACOBI_OFF_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 100

_SYMMETRY_RTOL = 1e-12


def lq_norm(v, q) -> float:
    """l_q norm of a vector for q in {1, 2, inf}."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got array of shape {v.shape}")
    if v.size == 0:
        return 0.0
    if q == 1:
        return float(np.sum(np.abs(v)))
    if q == 2:
        return float(math.sqrt(np.dot(v, v)))
    if q == math.inf:
        return float(np.max(np.abs(v)))
    raise ValueError(f"unsupported norm order {q!r}; use 1, 2 or math.inf")


def inner(v, w) -> float:
    """Euclidean inner product; the two vectors must have equal length."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != w.shape or v.ndim != 1:
        raise ValueError(
            f"inner product needs two vectors of equal length, got shapes {v.shape} and {w.shape}"
        )
    return float(np.dot(v, w))


def _rref(X: np.ndarray, rank_tolerance: float):
    """Reduced row echelon form with partial pivoting.

    Returns (R, pivot_cols).  Entries below ``rank_tolerance * max|X|`` are
    treated as zero when choosing pivots.
    """
    R = np.array(X, dtype=float, copy=True)
    n, p = R.shape
    scale = float(np.max(np.abs(R))) if R.size else 0.0
    tol_abs = rank_tolerance * scale
    pivot_cols: list[int] = []
    row = 0
    for col in range(p):
        if row >= n:
            break
        sub = np.abs(R[row:, col])
        k = int(np.argmax(sub))
        if sub[k] <= tol_abs:
            R[row:, col] = 0.0
            continue
        piv = row + k
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        R[row] = R[row] / R[row, col]
        for i in range(n):
            if i != row and R[i, col] != 0.0:
                R[i] = R[i] - R[i, col] * R[row]
                R[i, col] = 0.0
        pivot_cols.append(col)
        row += 1
    return R, pivot_cols


def row_echelon_rank(X, rank_tolerance: float = DEFAULT_RANK_TOL) -> int:
    """Rank of X by the same elimination that backs :func:`nullspace`."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    _, pivot_cols = _rref(X, rank_tolerance)
    return len(pivot_cols)


@dataclass
class NullspaceBasis:
    """Basis of the nullspace of a matrix.

    ``basis`` holds ``dim`` vectors in R^p, each normalized so that its last
    nonzero coordinate equals 1.
    """

    dim: int
    basis: list[np.ndarray] = field(default_factory=list)
    rank_tolerance: float = DEFAULT_RANK_TOL

    def matrix(self) -> np.ndarray:
        """Basis vectors stacked as the columns of a (p, dim) array."""
        if self.dim == 0:
            raise ValueError("nullspace is trivial; no basis matrix to return")
        return np.column_stack(self.basis)


def nullspace(X, rank_tolerance: float = DEFAULT_RANK_TOL) -> NullspaceBasis:
    """Nullspace basis of X via row reduction with partial pivoting.

    Parameters
    ----------
    X : array_like, shape (n, p)
    rank_tolerance : float
        Pivot threshold, relative to the largest absolute entry of X.

    Returns
    -------
    NullspaceBasis
        One vector per free column, normalized so the last nonzero
        coordinate equals 1.  Each vector v is checked to satisfy
        ||X v||_2 <= rank_tolerance * ||v||_2 * max|X|.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n, p = X.shape
    R, pivot_cols = _rref(X, rank_tolerance)
    free_cols = [c for c in range(p) if c not in pivot_cols]
    basis = []
    for c in free_cols:
        v = np.zeros(p)
        v[c] = 1.0
        for i, pc in enumerate(pivot_cols):
            v[pc] = -R[i, c]
        nz = np.nonzero(v)[0]
        last = nz[-1]
        if v[last] != 1.0:
            v = v / v[last]
        basis.append(v)
    scale = float(np.max(np.abs(X))) if X.size else 0.0
    for v in basis:
        resid = lq_norm(X @ v, 2)
        if resid > rank_tolerance * lq_norm(v, 2) * scale:
            raise RuntimeError(
                f"nullspace vector fails the residual check: ||Xv|| = {resid:.3e} "
                f"against tolerance {rank_tolerance * lq_norm(v, 2) * scale:.3e}"
            )
    return NullspaceBasis(dim=len(basis), basis=basis, rank_tolerance=rank_tolerance)


class LeastSquaresFit(NamedTuple):
    coeffs: np.ndarray
    residual_norm: float
    rank_deficient: bool


def _solve_normal_equations(G: np.ndarray, rhs: np.ndarray, rank_tolerance: float):
    """Gaussian elimination with partial pivoting on the normal equations.

    Returns (solution, rank_deficient).  A pivot below
    ``rank_tolerance * max|G|`` flags the system as rank-deficient.
    """
    m = G.shape[0]
    A = np.array(G, dtype=float, copy=True)
    b = np.array(rhs, dtype=float, copy=True)
    tol_abs = rank_tolerance * max(float(np.max(np.abs(A))), 1e-300)
    for col in range(m):
        k = col + int(np.argmax(np.abs(A[col:, col])))
        if abs(A[k, col]) <= tol_abs:
            return None, True
        if k != col:
            A[[col, k]] = A[[k, col]]
            b[[col, k]] = b[[k, col]]
        for i in range(col + 1, m):
            f = A[i, col] / A[col, col]
            if f != 0.0:
                A[i, col:] -= f * A[col, col:]
                b[i] -= f * b[col]
    x = np.zeros(m)
    for i in range(m - 1, -1, -1):
        x[i] = (b[i] - np.dot(A[i, i + 1 :], x[i + 1 :])) / A[i, i]
    return x, False


def least_squares_on_support(
    X, Y, support, rank_tolerance: float = DEFAULT_RANK_TOL
) -> LeastSquaresFit:
    """Minimize ||Y - X_T b_T||_2 over coefficients supported on T.

    Parameters
    ----------
    X : array_like, shape (n, p)
    Y : array_like, shape (n,)
    support : iterable of int
        Column indices (0-based, unique), at most n of them.

    Returns
    -------
    LeastSquaresFit
        Coefficients on the support in index order, the residual norm, and
        a flag that is True when the normal equations were rank-deficient.
        In the deficient case the minimum-norm solution is returned.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.asarray(Y, dtype=float)
    n, p = X.shape
    T = tuple(int(j) for j in support)
    if len(set(T)) != len(T):
        raise ValueError(f"support contains repeated indices: {T}")
    if any(j < 0 or j >= p for j in T):
        raise ValueError(f"support indices out of range for p = {p}: {T}")
    if len(T) > n:
        raise ValueError(f"support size {len(T)} exceeds the number of rows {n}")
    if not T:
        return LeastSquaresFit(np.zeros(0), lq_norm(Y, 2), False)
    A = X[:, list(T)]
    coeffs, deficient = _solve_normal_equations(A.T @ A, A.T @ Y, rank_tolerance)
    if deficient:
        # Minimum-norm least squares; flagged so callers can tell.
        coeffs = np.linalg.lstsq(A, Y, rcond=None)[0]
    resid = lq_norm(Y - A @ coeffs, 2)
    return LeastSquaresFit(np.asarray(coeffs, dtype=float), resid, deficient)


def symmetric_eigenvalues(A) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi.

    Sweeps run until the off-diagonal Frobenius norm drops below
    1e-12 * ||A||_F.  The input must be symmetric to 1e-12 relative to its
    largest absolute entry.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, m2 = A.shape
    if m != m2:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if m == 0:
        return np.zeros(0)
    scale = float(np.max(np.abs(A)))
    if scale > 0.0 and float(np.max(np.abs(A - A.T))) > _SYMMETRY_RTOL * scale:
        raise ValueError("matrix is not symmetric within 1e-12 relative tolerance")
    B = np.array(A, dtype=float, copy=True)
    if m == 1:
        return B[0].copy()
    fro = float(np.linalg.norm(B))
    target = _JACOBI_OFF_TOL * fro
    upper = np.triu_indices(m, 1)
    for _ in range(_JACOBI_MAX_SWEEPS):
        # Summing the strict upper triangle directly; the subtraction trick
        # (||B||_F^2 minus the diagonal mass) cancels catastrophically once
        # the off-diagonal part is small and would stall the sweep loop.
        off = math.sqrt(2.0) * float(np.linalg.norm(B[upper]))
        if off <= target:
            break
        for i in range(m - 1):
            for j in range(i + 1, m):
                if B[i, j] == 0.0:
                    continue
                tau = (float(B[j, j]) - float(B[i, i])) / (2.0 * float(B[i, j]))
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                cth = 1.0 / math.sqrt(1.0 + t * t)
                sth = t * cth
                rot = np.array([[cth, sth], [-sth, cth]])
                idx = [i, j]
                B[idx, :] = rot.T @ B[idx, :]
                B[:, idx] = B[:, idx] @ rot
                B[i, j] = 0.0
                B[j, i] = 0.0
    else:
        off = math.sqrt(2.0) * float(np.linalg.norm(B[upper]))
        if off > target:
            raise RuntimeError("Jacobi iteration failed to reach the off-diagonal target")
    return np.sort(np.diag(B))
