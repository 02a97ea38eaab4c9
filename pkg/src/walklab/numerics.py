"""Dense complex linear algebra shared by every other module.

Matrices are plain numpy arrays of complex128 in row-major order. The
eigensolvers delegate to LAPACK (via numpy) behind the contracts below;
convergence failures surface as NoConvergence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotHermitian


def as_complex_matrix(a) -> np.ndarray:
    """Validate and return a 2D complex128 array (finite entries only)."""
    m = np.ascontiguousarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"expected a 2D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix has non-finite entries")
    return m


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, dims (a.rows*b.rows) x (a.cols*b.cols)."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return as_complex_matrix(a).conj().T


def hermiticity_defect(a: np.ndarray) -> float:
    """Max-entry norm of a - a^dagger."""
    a = np.asarray(a)
    return float(np.abs(a - a.conj().T).max())


@dataclass(frozen=True)
class HermitianEigenResult:
    """Eigenvalues ascending (real), eigenvectors as orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(a: np.ndarray, tol: float = 1e-10) -> HermitianEigenResult:
    """Eigendecomposition of a Hermitian matrix.

    Raises NotHermitian if ||a - a^dagger||_max exceeds tol. The strictly
    Hermitian part (a + a^dagger)/2 is decomposed, so results are insensitive
    to noise below tol.
    """
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NotHermitian(f"matrix is not square: {a.shape}")
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds tol {tol:.3e}")
    try:
        w, v = np.linalg.eigh((a + a.conj().T) / 2)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return HermitianEigenResult(eigenvalues=w, eigenvectors=v)


def general_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Eigenvalue multiset of a general (not necessarily Hermitian) square matrix."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix is not square: {a.shape}")
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc


def trace_norm(a: np.ndarray) -> float:
    """Sum of singular values; for Hermitian input this is sum |eigenvalues|."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix is not square: {a.shape}")
    try:
        s = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return float(s.sum())


def frobenius_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Frobenius inner product Tr(a^dagger b)."""
    return complex(np.vdot(a, b))
