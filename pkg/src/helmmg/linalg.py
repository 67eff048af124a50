"""Complex dense and sparse linear-algebra kernels.

These routines carry no Helmholtz knowledge; every other module builds on
them.  Sparse matrices are ``scipy.sparse`` CSR, dense matrices are
``numpy`` arrays of ``complex128``, vectors are 1-D ``numpy`` arrays.
"""

from dataclasses import dataclass

import numpy as np
import scipy.io
import scipy.linalg as sla
import scipy.sparse as sp

#: Largest dense matrix (entry count) the certificate machinery will touch.
#: 2401^2 = 5 764 801 covers the 49x49-grid (k = 30) certificate tables.
DENSE_LIMIT = 6_000_000


class DenseLimitError(RuntimeError):
    """Raised when a dense computation would exceed DENSE_LIMIT entries."""


@dataclass(frozen=True)
class Verdict:
    """Outcome of a definiteness test: ``ok`` plus a human-readable reason."""

    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def spmv(M, x):
    """Sparse matrix-vector product M @ x with an explicit dimension check."""
    x = np.asarray(x)
    if M.shape[1] != x.shape[0]:
        raise ValueError(
            f"dimension mismatch in spmv: matrix is {M.shape[0]}x{M.shape[1]}, "
            f"vector has length {x.shape[0]}"
        )
    return M @ x


def sparse_triple_product(R, A, P):
    """Galerkin-style triple product R @ A @ P in sparse arithmetic.

    Structural zeros are dropped from the result.
    """
    if R.shape[1] != A.shape[0] or A.shape[1] != P.shape[0]:
        raise ValueError(
            f"dimension mismatch in triple product: "
            f"R is {R.shape}, A is {A.shape}, P is {P.shape}"
        )
    out = (R @ A @ P).tocsr()
    out.eliminate_zeros()
    out.sort_indices()
    return out


def dense_lu_solve(M, b):
    """Solve the dense square system M x = b by partially pivoted LU.

    Raises ``np.linalg.LinAlgError`` naming the offending pivot when a
    pivot falls below 1e-14 times the largest entry of M.
    """
    M = np.asarray(M, dtype=complex)
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"dense_lu_solve requires a square matrix, got {M.shape}")
    lu, piv = sla.lu_factor(M)
    pivots = np.abs(np.diag(lu))
    tol = 1e-14 * max(np.abs(M).max(), 1e-300)
    bad = np.nonzero(pivots < tol)[0]
    if bad.size:
        raise np.linalg.LinAlgError(
            f"matrix singular to tolerance at pivot index {bad[0]}"
        )
    return sla.lu_solve((lu, piv), np.asarray(b, dtype=complex))


def _hermiticity_residual(M):
    nrm = sla.norm(M, "fro")
    if nrm == 0.0:
        return 0.0
    return sla.norm(M - M.conj().T, "fro") / nrm


def cholesky_hpd_test(M, tol=1e-12):
    """Hermitian-positive-definiteness test via complex Cholesky.

    The Hermiticity residual ||M - M^H||_F / ||M||_F is checked first; a
    matrix that is non-Hermitian beyond ``tol``**0.5-ish tolerances can
    never be HPD.  On the Hermitian path the verdict is HPD iff the
    factorization completes with every pivot above ``tol`` times the
    largest diagonal entry; the reason records the first failing pivot.
    """
    M = np.asarray(M, dtype=complex)
    herm = _hermiticity_residual(M)
    if herm > 1e-10:
        return Verdict(False, f"non-hermitian (residual {herm:.2e})")
    H = 0.5 * (M + M.conj().T)
    c, info = sla.lapack.zpotrf(H, lower=1)
    if info > 0:
        return Verdict(False, f"not positive definite: pivot failure at index {info - 1}")
    if info < 0:
        raise ValueError(f"invalid argument {-info} passed to zpotrf")
    pivots = np.real(np.diag(c)) ** 2
    floor = tol * max(np.real(np.diag(H)).max(), 1e-300)
    bad = np.nonzero(pivots < floor)[0]
    if bad.size:
        return Verdict(False, f"semidefinite to tolerance at pivot index {bad[0]}")
    return Verdict(True, "HPD")


def quick_pd_screen(M):
    """Four-condition necessary screen for positive definiteness.

    Checks, in order: (1) positive diagonal, (2) b_ii + b_jj > 2|Re b_ij|
    for i != j, (3) the element of largest modulus lies on the diagonal,
    (4) det(M) > 0 evaluated in sign/log-magnitude form.  Condition (4)
    is skipped with a warning in the reason string when the matrix
    exceeds DENSE_LIMIT.  Returns the first failing condition.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"quick_pd_screen requires a square matrix, got {M.shape}")
    if _hermiticity_residual(M) > 1e-12:
        raise ValueError("quick_pd_screen requires a Hermitian matrix")
    d = np.real(np.diag(M))
    if np.any(d <= 0):
        return Verdict(False, "condition 1: nonpositive diagonal entry")
    off = M - np.diag(np.diag(M))
    # condition 2: d_i + d_j > 2|Re m_ij| for all i != j
    bad = 2.0 * np.abs(np.real(off)) >= d[:, None] + d[None, :]
    np.fill_diagonal(bad, False)
    if bad.any():
        return Verdict(False, "condition 2: off-diagonal real part too large")
    if np.abs(off).max(initial=0.0) > d.max():
        return Verdict(False, "condition 3: largest modulus off the diagonal")
    if n * n > DENSE_LIMIT:
        return Verdict(True, "pass (condition 4 skipped: dense limit)")
    sign, _logdet = np.linalg.slogdet(M)
    if not (np.real(sign) > 0.5):
        return Verdict(False, "condition 4: determinant not positive")
    return Verdict(True, "pass")


def spectral_norm(M, tol=1e-10, max_iter=5000):
    """2-norm of M via power iteration on M^H M.

    Uses a fixed, reproducible start vector (ones plus a small index
    perturbation).  Returns ``(value, converged)``; on non-convergence
    the best estimate is returned with ``converged=False``.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    M = np.asarray(M, dtype=complex)
    n = M.shape[1]
    x = np.ones(n, dtype=complex) + 1e-3 * np.arange(n)
    x /= np.linalg.norm(x)
    lam = 0.0
    converged = False
    for _ in range(max_iter):
        y = M.conj().T @ (M @ x)
        lam_new = float(np.real(np.vdot(x, y)))
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            return 0.0, True
        x = y / nrm
        if abs(lam_new - lam) <= tol * max(abs(lam_new), 1e-300):
            lam = lam_new
            converged = True
            break
        lam = lam_new
    return float(np.sqrt(max(lam, 0.0))), converged


def norm1(M):
    """Induced 1-norm (max absolute column sum) of a dense matrix."""
    return float(np.abs(np.asarray(M)).sum(axis=0).max())


def condition_number_p1(M):
    """kappa_1(M) = ||M||_1 ||M^-1||_1 with the inverse from dense LU."""
    M = np.asarray(M, dtype=complex)
    if M.shape[0] != M.shape[1]:
        raise ValueError("condition_number_p1 requires a square matrix")
    lu, piv = sla.lu_factor(M)
    pivots = np.abs(np.diag(lu))
    if pivots.min(initial=np.inf) < 1e-14 * max(np.abs(M).max(), 1e-300):
        raise np.linalg.LinAlgError("matrix singular to tolerance in condition_number_p1")
    inv = sla.lu_solve((lu, piv), np.eye(M.shape[0], dtype=complex))
    return norm1(M) * norm1(inv)


def save_matrix_market(path, M):
    """Write a sparse or dense complex matrix in Matrix Market format."""
    scipy.io.mmwrite(str(path), sp.csr_matrix(M))


def load_matrix_market(path):
    """Read a Matrix Market file back as CSR."""
    return sp.csr_matrix(scipy.io.mmread(str(path)))
