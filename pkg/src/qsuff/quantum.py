"""States, effects and CPTP channels in Kraus form.

States and effects are plain ``numpy`` arrays checked by :func:`as_density_matrix`
and :func:`as_effect`. Channels are :class:`QuantumChannel` objects holding a
stack of Kraus operators; the Choi matrix is derived on demand.

Choi convention: ``C = sum_ij Phi(|i><j|) (x) |i><j|`` with the output factor
first, i.e. ``C[(k, i), (l, j)] = <k| Phi(|i><j|) |l>``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, InvalidChannel, InvalidState, NotHermitian, NotPSD, NotPSDOutput

STATE_TOL = 1e-10
CHANNEL_TOL = 1e-8


def as_density_matrix(rho, atol: float = STATE_TOL) -> np.ndarray:
    """Validate a density matrix and return its symmetrized, dust-clipped copy.

    Raises:
        InvalidState: if ``rho`` is not Hermitian, not PSD or not unit trace
            within ``atol``.
    """
    try:
        w, V = linalg.psd_eig(rho, hermiticity_tol=atol)
    except NotHermitian as exc:
        raise InvalidState(f"not Hermitian: {exc}") from exc
    except NotPSD as exc:
        raise InvalidState(f"not positive semidefinite: {exc}") from exc
    tr = w.sum()
    if abs(tr - 1.0) > atol:
        raise InvalidState(f"trace is {tr:.12g}, expected 1")
    return (V * w) @ V.conj().T


def as_effect(M, atol: float = STATE_TOL) -> np.ndarray:
    """Validate ``0 <= M <= I`` and return the symmetrized matrix."""
    try:
        M = linalg.hermitize(M, atol)
    except NotHermitian as exc:
        raise InvalidState(f"effect not Hermitian: {exc}") from exc
    w = np.linalg.eigvalsh(M)
    if w[0] < -atol or w[-1] > 1 + atol:
        raise InvalidState(f"effect spectrum [{w[0]:.3g}, {w[-1]:.3g}] outside [0, 1]")
    return M


def _check_same_dim(rho, tau):
    if rho.shape != tau.shape:
        raise DimensionMismatch(f"dimensions differ: {rho.shape} vs {tau.shape}")


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """CPTP map ``X -> sum_i K_i X K_i^dagger``.

    ``kraus`` has shape ``(r, dim_out, dim_in)``. Trace preservation is
    checked on construction against :data:`CHANNEL_TOL`.
    """

    kraus: np.ndarray

    def __post_init__(self):
        K = np.asarray(self.kraus, dtype=complex)
        if K.ndim == 2:
            K = K[None]
        if K.ndim != 3 or K.shape[0] == 0:
            raise InvalidChannel(f"Kraus stack must have shape (r, dim_out, dim_in), got {K.shape}")
        if not np.all(np.isfinite(K)):
            raise InvalidChannel("Kraus operators contain non-finite entries")
        din = K.shape[2]
        tp_err = np.linalg.norm(np.einsum("rki,rkj->ij", K.conj(), K) - np.eye(din))
        if tp_err > CHANNEL_TOL:
            raise InvalidChannel(f"not trace preserving: ||sum K^dagger K - I||_F = {tp_err:.3e}")
        # nonzero spectrum of the Choi matrix equals that of the Kraus Gram matrix
        vecs = K.reshape(K.shape[0], -1)
        gram = vecs.conj() @ vecs.T
        if np.linalg.eigvalsh((gram + gram.conj().T) / 2)[0] < -CHANNEL_TOL:
            raise InvalidChannel("Choi matrix is not positive semidefinite")
        K.setflags(write=False)
        object.__setattr__(self, "kraus", K)

    @property
    def dim_in(self) -> int:
        return self.kraus.shape[2]

    @property
    def dim_out(self) -> int:
        return self.kraus.shape[1]

    def __call__(self, rho):
        return apply_channel(self, rho)


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    dim_in: int
    dim_out: int
    matrix: np.ndarray

    def __post_init__(self):
        C = np.asarray(self.matrix, dtype=complex)
        n = self.dim_in * self.dim_out
        if C.shape != (n, n):
            raise InvalidChannel(f"Choi matrix must be {n}x{n}, got {C.shape}")
        C = (C + C.conj().T) / 2
        w = np.linalg.eigvalsh(C)
        if w[0] < -CHANNEL_TOL:
            raise InvalidChannel(f"Choi matrix not PSD (min eigenvalue {w[0]:.3e})")
        tr_out = np.einsum("kikj->ij", C.reshape(self.dim_out, self.dim_in, self.dim_out, self.dim_in))
        if np.linalg.norm(tr_out - np.eye(self.dim_in)) > CHANNEL_TOL:
            raise InvalidChannel("partial trace of Choi matrix over the output is not the identity")
        C.setflags(write=False)
        object.__setattr__(self, "matrix", C)


def apply_kraus(kraus, X) -> np.ndarray:
    """Linear action ``sum_i K_i X K_i^dagger`` with no validation of ``X``."""
    K = np.asarray(kraus)
    return np.einsum("rki,ij,rlj->kl", K, X, K.conj())


def apply_channel(phi: QuantumChannel, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (phi.dim_in, phi.dim_in):
        raise DimensionMismatch(f"channel expects {phi.dim_in}x{phi.dim_in} input, got {rho.shape}")
    out = apply_kraus(phi.kraus, rho)
    return as_density_matrix(out, atol=CHANNEL_TOL)


def apply_adjoint(phi: QuantumChannel, A) -> np.ndarray:
    """Heisenberg-picture map ``A -> sum_i K_i^dagger A K_i``."""
    A = np.asarray(A, dtype=complex)
    if A.shape != (phi.dim_out, phi.dim_out):
        raise DimensionMismatch(f"adjoint expects {phi.dim_out}x{phi.dim_out} input, got {A.shape}")
    K = phi.kraus
    return np.einsum("rki,kl,rlj->ij", K.conj(), A, K)


def kraus_to_choi(phi: QuantumChannel) -> ChoiMatrix:
    vecs = phi.kraus.reshape(phi.kraus.shape[0], -1)
    return ChoiMatrix(phi.dim_in, phi.dim_out, vecs.T @ vecs.conj())


def choi_to_channel(choi: ChoiMatrix, zero_tol: float = 1e-12) -> QuantumChannel:
    """Kraus family from the spectral decomposition of a Choi matrix."""
    w, V = np.linalg.eigh(choi.matrix)
    keep = w > zero_tol * max(1.0, w[-1])
    vecs = V[:, keep] * np.sqrt(w[keep])
    return QuantumChannel(vecs.T.reshape(-1, choi.dim_out, choi.dim_in))


def apply_choi(choi: ChoiMatrix, X) -> np.ndarray:
    """Linear action of a Choi matrix with no validation of ``X``."""
    C = choi.matrix.reshape(choi.dim_out, choi.dim_in, choi.dim_out, choi.dim_in)
    return np.einsum("kilj,ij->kl", C, X)


def apply_via_choi(choi: ChoiMatrix, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (choi.dim_in, choi.dim_in):
        raise DimensionMismatch(f"Choi matrix expects {choi.dim_in}x{choi.dim_in} input, got {rho.shape}")
    out = apply_choi(choi, rho)
    try:
        return as_density_matrix(out, atol=CHANNEL_TOL)
    except InvalidState as exc:
        raise NotPSDOutput(str(exc)) from exc


def channel_compose(psi: QuantumChannel, phi: QuantumChannel) -> QuantumChannel:
    """Kraus family of ``psi o phi`` (apply ``phi`` first)."""
    if psi.dim_in != phi.dim_out:
        raise DimensionMismatch(f"cannot compose: psi.dim_in={psi.dim_in}, phi.dim_out={phi.dim_out}")
    K = np.einsum("jab,ibc->jiac", psi.kraus, phi.kraus)
    return QuantumChannel(K.reshape(-1, psi.dim_out, phi.dim_in))


def fidelity(rho, tau) -> float:
    """Root fidelity ``||rho^{1/2} tau^{1/2}||_1`` (not squared)."""
    rho = np.asarray(rho, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    _check_same_dim(rho, tau)
    prod = linalg.matrix_power(rho, 0.5) @ linalg.matrix_power(tau, 0.5)
    return float(np.linalg.svd(prod, compute_uv=False).sum())


def trace_distance(rho, tau) -> float:
    """Half the trace norm of the difference."""
    rho = np.asarray(rho, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    _check_same_dim(rho, tau)
    return 0.5 * linalg.trace_norm(rho - tau)


# ---------------------------------------------------------------------------
# standard channels
# ---------------------------------------------------------------------------


def identity_channel(d: int) -> QuantumChannel:
    return QuantumChannel(np.eye(d)[None])


def unitary_channel(U) -> QuantumChannel:
    return QuantumChannel(np.asarray(U, dtype=complex)[None])


def depolarizing_channel(d: int, p: float) -> QuantumChannel:
    """``X -> (1 - p) X + p Tr[X] I / d``."""
    if not 0 <= p <= 1:
        raise InvalidChannel(f"depolarizing parameter must lie in [0, 1], got {p}")
    # replacement part: Kraus |k><j| / sqrt(d) for all k, j
    E = np.zeros((d * d, d, d))
    for k in range(d):
        for j in range(d):
            E[k * d + j, k, j] = 1.0
    kraus = [np.sqrt(1 - p) * np.eye(d)] + list(np.sqrt(p / d) * E)
    return QuantumChannel(np.array(kraus))


def completely_depolarizing_channel(d: int) -> QuantumChannel:
    return depolarizing_channel(d, 1.0)


def replacement_channel(d_in: int, tau) -> QuantumChannel:
    """``X -> Tr[X] tau``."""
    tau = as_density_matrix(tau)
    w, V = linalg.psd_eig(tau)
    kraus = []
    for k in np.flatnonzero(w > 0):
        for j in range(d_in):
            op = np.zeros((tau.shape[0], d_in), dtype=complex)
            op[:, j] = np.sqrt(w[k]) * V[:, k]
            kraus.append(op)
    return QuantumChannel(np.array(kraus))


def attach_ancilla_channel(d: int, tau) -> QuantumChannel:
    """``X -> X (x) tau``, a channel with an exact inverse (partial trace)."""
    tau = as_density_matrix(tau)
    w, V = linalg.psd_eig(tau)
    kraus = [np.kron(np.eye(d), np.sqrt(w[k]) * V[:, [k]]) for k in np.flatnonzero(w > 0)]
    return QuantumChannel(np.array(kraus))


def partial_trace_channel(d_keep: int, d_discard: int) -> QuantumChannel:
    """Trace out the second tensor factor of ``C^d_keep (x) C^d_discard``."""
    basis = np.eye(d_discard)
    kraus = [np.kron(np.eye(d_keep), basis[[k], :]) for k in range(d_discard)]
    return QuantumChannel(np.array(kraus))


def pinching_channel(projectors) -> QuantumChannel:
    """``X -> sum_k P_k X P_k`` for projectors summing to the identity."""
    P = np.array([linalg.hermitize(p) for p in projectors])
    return QuantumChannel(P)


def partial_trace(X, dims: tuple[int, int], keep: int = 0) -> np.ndarray:
    dA, dB = dims
    T = np.asarray(X).reshape(dA, dB, dA, dB)
    return np.einsum("ijkj->ik", T) if keep == 0 else np.einsum("ijil->jl", T)
