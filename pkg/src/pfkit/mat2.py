"""Exact-shape 2x2 complex linear algebra.

Matrices are plain ``numpy`` arrays of shape (2, 2) and dtype complex128;
vectors are shape (2,).  Everything here is a pure function of its inputs,
safe to call from any number of threads.  The module provides closed-form
eigenpairs, Sylvester positivity tests and a spectral Hermitian square root
that serves as the validation oracle for the closed-form roots built
elsewhere in the package.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, NotHermitian, NotPositiveDefinite

__all__ = [
    "EigenPair",
    "mat2",
    "vec2",
    "identity2",
    "dagger",
    "commutator",
    "anticommutator",
    "max_abs",
    "eigvals2",
    "eigenpairs",
    "is_hermitian",
    "is_positive_definite",
    "hermitian_sqrt_oracle",
    "DEGENERACY_TOL",
]

#: default relative tolerance for eigenvalue-coalescence detection
DEGENERACY_TOL = 1e-10


def mat2(m00, m01, m10, m11):
    """Build a 2x2 complex matrix, rejecting non-finite entries."""
    m = np.array([[m00, m01], [m10, m11]], dtype=complex)
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("matrix entries must be finite")
    return m


def vec2(c0, c1):
    """Build a 2-component complex vector, rejecting non-finite entries."""
    v = np.array([c0, c1], dtype=complex)
    if not np.all(np.isfinite(v.view(float))):
        raise ValueError("vector entries must be finite")
    return v


def identity2():
    return np.eye(2, dtype=complex)


def dagger(m):
    """Hermitian adjoint."""
    return m.conj().T


def commutator(a, b):
    return a @ b - b @ a


def anticommutator(a, b):
    """AB + BA by componentwise complex arithmetic (symmetric in A, B)."""
    return a @ b + b @ a


def max_abs(m):
    """Max-norm (largest entry magnitude); the residual norm used throughout."""
    return float(np.max(np.abs(m)))


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue with a unit-norm eigenvector."""

    value: complex
    vector: np.ndarray


def eigvals2(m):
    """Both eigenvalues of a 2x2 matrix, ordered lexicographically by (re, im).

    Uses the closed-form quadratic formula; total (never raises), so phase
    classifiers can inspect coalescent spectra.
    """
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    half = 0.5 * tr
    d = np.sqrt(complex(half * half - det))
    lo, hi = half - d, half + d
    if (hi.real, hi.imag) < (lo.real, lo.imag):
        lo, hi = hi, lo
    return complex(lo), complex(hi)


def _eigvec_for(m, lam):
    # rows of (M - lam*1) are both orthogonal complements of the eigenvector;
    # take the better-conditioned one
    r0 = np.array([m[0, 0] - lam, m[0, 1]])
    r1 = np.array([m[1, 0], m[1, 1] - lam])
    row = r0 if np.abs(r0).sum() >= np.abs(r1).sum() else r1
    v = np.array([row[1], -row[0]])
    n = np.linalg.norm(v)
    if n == 0.0:  # matrix is lam * identity
        v, n = np.array([1.0 + 0j, 0.0]), 1.0
    v = v / n
    # deterministic gauge: largest component real positive
    k = int(np.argmax(np.abs(v)))
    ph = v[k] / abs(v[k])
    return v / ph


def eigenpairs(m, tol=DEGENERACY_TOL):
    """Eigenpairs of ``m`` ordered lexicographically by eigenvalue (re, im).

    Parameters
    ----------
    m : ndarray
        2x2 complex matrix.
    tol : float
        Relative coalescence tolerance.  When the eigenvalue gap falls below
        ``tol * (1 + |tr m|)`` the spectrum is treated as degenerate.

    Returns
    -------
    (EigenPair, EigenPair)

    Raises
    ------
    DegenerateSpectrum
        When the gap is below tolerance (candidate exceptional point).
        Jordan blocks land here too: no diagonalizing basis is attempted.
    """
    lo, hi = eigvals2(m)
    scale = 1.0 + abs(m[0, 0] + m[1, 1])
    gap = abs(hi - lo)
    if gap < tol * scale:
        raise DegenerateSpectrum(
            f"eigenvalues coalesce (gap {gap:.3e} < {tol:.1e} * {scale:.3e})",
            gap=gap, scale=scale)
    return (EigenPair(lo, _eigvec_for(m, lo)), EigenPair(hi, _eigvec_for(m, hi)))


def is_hermitian(m, tol=1e-9):
    return max_abs(m - dagger(m)) <= tol * (1.0 + max_abs(m))


def _require_hermitian(m, tol, who):
    if not is_hermitian(m, tol):
        raise NotHermitian(f"{who}: matrix is not Hermitian within {tol:g}")


def is_positive_definite(m, tol=1e-12):
    """Sylvester's criterion: leading entry and determinant both positive.

    ``m`` must be Hermitian within ``tol`` (checked, raises NotHermitian).
    """
    _require_hermitian(m, max(tol, 1e-9), "is_positive_definite")
    det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
    return bool(m[0, 0].real > tol and det > tol)


def hermitian_sqrt_oracle(m, tol=1e-9):
    """Unique Hermitian positive-definite square root, by spectral decomposition.

    This is the independent oracle used to validate closed-form roots:
    ``R @ R`` reproduces ``m`` to ~1e-15 relative for well-conditioned input.

    Raises
    ------
    NotHermitian
        If ``m`` deviates from self-adjointness beyond ``tol``.
    NotPositiveDefinite
        If Sylvester's criterion fails.
    """
    _require_hermitian(m, tol, "hermitian_sqrt_oracle")
    if not is_positive_definite(m, tol=0.0):
        raise NotPositiveDefinite("matrix is not positive definite")
    h = 0.5 * (m + dagger(m))  # symmetrize away the tolerated defect
    w, v = np.linalg.eigh(h)
    if w[0] <= 0.0:
        raise NotPositiveDefinite(f"non-positive eigenvalue {w[0]:.3e}")
    return (v * np.sqrt(w)) @ dagger(v)
