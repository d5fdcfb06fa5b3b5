"""Dense complex Hermitian linear algebra: the numerical substrate.

All operators in this package are small (dimension <= ~16) dense complex
matrices.  Hermitian inputs are checked against ``HERM_TOL`` before any
spectral computation, and every eigendecomposition is verified by its
reconstruction residual.
"""

from __future__ import annotations

import numpy as np

from .errors import DimMismatch, NoConvergence, NonHermitian
from .tolerances import EIG_TOL, HERM_TOL


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a finite complex 2-D array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise DimMismatch(f"expected a 2-D matrix, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError("matrix contains non-finite entries")
    return arr


def herm_residual(m) -> float:
    """Max entry-wise |H - H^dagger|."""
    arr = as_complex_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        return float("inf")
    return float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0


def require_hermitian(m, tol: float = HERM_TOL) -> np.ndarray:
    arr = as_complex_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise NonHermitian(f"matrix is {arr.shape[0]}x{arr.shape[1]}, not square")
    resid = herm_residual(arr)
    if resid > tol:
        raise NonHermitian(f"Hermiticity residual {resid:.3e} exceeds {tol:.1e}")
    return arr


def eigvalsh(h) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    The eigenbasis is computed alongside and the input must be reconstructed
    from it to within ``EIG_TOL``, otherwise ``NoConvergence`` is raised.
    """
    arr = require_hermitian(h)
    try:
        w, v = np.linalg.eigh(arr)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    resid = float(np.max(np.abs(arr - (v * w) @ v.conj().T)))
    if resid > EIG_TOL:
        raise NoConvergence(f"eigen-reconstruction residual {resid:.3e} exceeds {EIG_TOL:.1e}")
    return w


def opnorm_maxeig(h) -> float:
    """Largest eigenvalue of a Hermitian operator."""
    return float(eigvalsh(h)[-1])


def commutator(a, b) -> np.ndarray:
    """AB - BA for Hermitian operands of equal dimension."""
    ma = require_hermitian(a)
    mb = require_hermitian(b)
    if ma.shape != mb.shape:
        raise DimMismatch(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    return ma @ mb - mb @ ma


def tensor(a, b) -> np.ndarray:
    """Kronecker product."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def is_psd(h, tol: float) -> bool:
    """True iff the smallest eigenvalue is >= -tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return bool(eigvalsh(h)[0] >= -tol)


def embed_real(h) -> np.ndarray:
    """Real symmetric embedding of a Hermitian matrix.

    H = A + iB maps to [[A, -B], [B, A]]; the image carries the same
    eigenvalues, each with doubled multiplicity.
    """
    arr = require_hermitian(h)
    a, b = arr.real, arr.imag
    return np.block([[a, -b], [b, a]])


def unembed_hermitian(z) -> np.ndarray:
    """Adjoint of ``embed_real``: fold a real symmetric 2d x 2d matrix to Hermitian d x d.

    Satisfies tr(embed_real(E) @ Z) == tr(E @ unembed_hermitian(Z)) for every
    Hermitian E, and maps PSD to PSD.  On embedded points it returns twice the
    original matrix.
    """
    arr = np.asarray(z, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2:
        raise DimMismatch("expected a square matrix of even dimension")
    d = arr.shape[0] // 2
    z11, z12 = arr[:d, :d], arr[:d, d:]
    z21, z22 = arr[d:, :d], arr[d:, d:]
    return (z11 + z22) + 1j * (z21 - z12)
