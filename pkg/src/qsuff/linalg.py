"""Dense Hermitian linear algebra used by every other module.

All routines take plain ``numpy`` arrays. Hermitian inputs are checked against
a relative tolerance and then replaced by ``(A + A^dagger) / 2`` so round-off
asymmetry never leaks into downstream spectra.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .errors import ConvergenceFailure, DomainError, NotHermitian, NotPSD, NotSquare

# relative cutoff (times the largest eigenvalue) separating support from kernel
SUPPORT_RTOL = 1e-10
# eigenvalues in [-PSD_RTOL * max(1, lambda_max), 0) are treated as round-off
PSD_RTOL = 1e-10
HERMITIAN_RTOL = 1e-10

# set by the test suite; verifies the decomposition residuals on every call
CHECK_INVARIANTS = False


class HermitianEigen(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


class SupportProjection(NamedTuple):
    projector: np.ndarray
    rank: int
    threshold: float


class PosNegParts(NamedTuple):
    pos: np.ndarray
    neg: np.ndarray
    tr_pos: float
    tr_neg: float


def _as_square(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix has non-finite entries")
    return A


def hermitize(A, hermiticity_tol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Check that ``A`` is Hermitian to a relative tolerance and symmetrize it."""
    A = _as_square(A)
    scale = max(1.0, np.linalg.norm(A))
    err = np.linalg.norm(A - A.conj().T)
    if err > hermiticity_tol * scale:
        raise NotHermitian(f"||A - A^dagger||_F = {err:.3e} exceeds {hermiticity_tol:.1e} * {scale:.3g}")
    return (A + A.conj().T) / 2


def hermitian_eig(A, hermiticity_tol: float = HERMITIAN_RTOL) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    Args:
        A: square complex matrix, Hermitian up to ``hermiticity_tol`` (relative
            to ``max(1, ||A||_F)``).
        hermiticity_tol: allowed relative anti-Hermitian residual.

    Returns:
        HermitianEigen with ascending eigenvalues and orthonormal eigenvector
        columns.
    """
    A = hermitize(A, hermiticity_tol)
    try:
        w, V = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    if CHECK_INVARIANTS:
        d = A.shape[0]
        resid = np.linalg.norm(A - (V * w) @ V.conj().T)
        assert resid <= d * 1e-12 * max(1.0, np.linalg.norm(A)), resid
        assert np.linalg.norm(V.conj().T @ V - np.eye(d)) <= d * 1e-12
    return HermitianEigen(w, V)


def _support_threshold(w: np.ndarray, threshold: float | None) -> float:
    if threshold is not None:
        return threshold
    top = float(np.max(w)) if w.size else 0.0
    return SUPPORT_RTOL * top if top > 0 else 0.0


def psd_eig(A, hermiticity_tol: float = HERMITIAN_RTOL) -> HermitianEigen:
    """Eigendecomposition of a PSD matrix with small negative eigenvalues clipped to zero."""
    w, V = hermitian_eig(A, hermiticity_tol)
    floor = -PSD_RTOL * max(1.0, float(w[-1]))
    if w[0] < floor:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} below {floor:.1e}")
    return HermitianEigen(np.clip(w, 0.0, None), V)


def positive_negative_parts(A) -> PosNegParts:
    """Split a Hermitian matrix as ``A = pos - neg`` with orthogonal PSD parts."""
    w, V = hermitian_eig(A)
    wp = np.clip(w, 0.0, None)
    wn = np.clip(-w, 0.0, None)
    pos = (V * wp) @ V.conj().T
    neg = (V * wn) @ V.conj().T
    return PosNegParts(pos, neg, float(wp.sum()), float(wn.sum()))


def trace_norm(A) -> float:
    """Sum of singular values; uses the spectrum directly when ``A`` is Hermitian."""
    A = _as_square(A)
    if np.linalg.norm(A - A.conj().T) <= HERMITIAN_RTOL * max(1.0, np.linalg.norm(A)):
        return float(np.abs(np.linalg.eigvalsh((A + A.conj().T) / 2)).sum())
    return float(np.linalg.svd(A, compute_uv=False).sum())


def matrix_function(
    A,
    f: Callable[[np.ndarray], np.ndarray],
    support_only: bool = False,
    threshold: float | None = None,
) -> np.ndarray:
    """Apply a scalar function to the spectrum of a Hermitian matrix.

    ``f`` receives a 1-d array of eigenvalues and may return complex values.
    With ``support_only`` it is evaluated only on eigenvalues above the
    support threshold and the kernel is mapped to zero.
    """
    w, V = hermitian_eig(A)
    if support_only:
        keep = w > _support_threshold(w, threshold)
        fw = np.zeros(w.shape, dtype=complex)
        with np.errstate(all="ignore"):
            fw[keep] = f(w[keep])
    else:
        with np.errstate(all="ignore"):
            fw = np.asarray(f(w), dtype=complex)
    if not np.all(np.isfinite(fw)):
        raise DomainError("function undefined on a retained eigenvalue")
    return (V * fw) @ V.conj().T


def matrix_power(A, exponent: complex, threshold: float | None = None) -> np.ndarray:
    """``A**exponent`` for PSD ``A``, restricted to the support (zero on the kernel).

    Complex exponents are allowed, so ``matrix_power(s, 0.5 - 1j * t)`` gives
    ``s^(1/2 - it)`` on the support of ``s``.
    """
    w, V = psd_eig(A)
    keep = w > _support_threshold(w, threshold)
    fw = np.zeros(w.shape, dtype=complex)
    fw[keep] = np.exp(exponent * np.log(w[keep]))
    return (V * fw) @ V.conj().T


def matrix_log(A, threshold: float | None = None) -> np.ndarray:
    """Natural logarithm on the support of a PSD matrix, zero on its kernel."""
    w, V = psd_eig(A)
    keep = w > _support_threshold(w, threshold)
    fw = np.zeros(w.shape)
    fw[keep] = np.log(w[keep])
    return (V * fw) @ V.conj().T


def matrix_imaginary_power(A, t: float, threshold: float | None = None) -> np.ndarray:
    """``A^{it}`` on the support of PSD ``A`` and the identity on its kernel."""
    w, V = psd_eig(A)
    keep = w > _support_threshold(w, threshold)
    fw = np.ones(w.shape, dtype=complex)
    fw[keep] = np.exp(1j * t * np.log(w[keep]))
    return (V * fw) @ V.conj().T


def support_projection(A, threshold: float | None = None) -> SupportProjection:
    if threshold is not None and threshold <= 0:
        raise DomainError("support threshold must be positive")
    w, V = psd_eig(A)
    cut = _support_threshold(w, threshold)
    keep = w > cut
    Vk = V[:, keep]
    return SupportProjection(Vk @ Vk.conj().T, int(keep.sum()), cut)
