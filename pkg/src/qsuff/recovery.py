"""Petz recovery maps, their rotated and averaged versions, and sufficiency checks.

For a channel ``phi`` and reference state ``sigma`` the Petz map is

    X -> sigma^{1/2} phi^*(phi(sigma)^{-1/2} X phi(sigma)^{-1/2}) sigma^{1/2}

with Kraus operators ``sigma^{1/2} K_i^dagger phi(sigma)^{-1/2}``. The rotated
map at ``t`` conjugates with the modular unitaries ``sigma^{-it}`` and
``phi(sigma)^{it}``, giving Kraus operators
``sigma^{1/2 - it} K_i^dagger phi(sigma)^{-1/2 + it}``. All powers are taken on
supports, so these maps are trace preserving only on ``supp(phi(sigma))``;
:meth:`PetzMap.as_channel` and :func:`universal_recovery` complete them on the
kernel by emitting a fixed state (``sigma`` by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .divergences import d_max, relative_entropy_spectral, supported
from .errors import DimensionMismatch, EvenNodeCount, InvalidTruncation, SupportViolation
from .hypothesis import check_dpi_pointwise, curve_arrays, default_grid, deficiency_epsilon, image_kinks
from .linalg import SupportProjection
from .quantum import (
    ChoiMatrix,
    QuantumChannel,
    apply_adjoint,
    apply_channel,
    apply_kraus,
    apply_via_choi,
    as_density_matrix,
    choi_to_channel,
    fidelity,
)

DEFAULT_T = 4.0
DEFAULT_NODES = 801
DEFAULT_THRESHOLD = 1e-6
BORDERLINE_THRESHOLD = 1e-4
DEFAULT_T_SAMPLES = (-1.0, 0.3, 2.0)


def beta0(t):
    """Density ``pi / (cosh(2 pi t) + 1)`` used to average the rotated Petz maps."""
    # pi / (cosh x + 1) = 2 pi e^{-|x|} / (1 + e^{-|x|})^2, which cannot overflow
    e = np.exp(-2 * np.pi * np.abs(np.asarray(t, dtype=float)))
    return 2 * np.pi * e / (1.0 + e) ** 2


def beta0_mass(T: float) -> float:
    """``int_{-T}^{T} beta0 = tanh(pi T)``."""
    return math.tanh(math.pi * T)


def beta0_characteristic(omega):
    """``int beta0(t) exp(-i t omega) dt = (omega / 2) / sinh(omega / 2)``."""
    omega = np.asarray(omega, dtype=float)
    half = omega / 2.0
    with np.errstate(invalid="ignore", over="ignore"):
        out = np.where(half == 0.0, 1.0, half / np.sinh(np.where(half == 0.0, 1.0, half)))
    return out


def _kernel_kraus(P: np.ndarray, state: np.ndarray) -> list[np.ndarray]:
    """Kraus operators of ``X -> Tr[(I - P) X] state``."""
    w, V = np.linalg.eigh(np.eye(P.shape[0]) - P)
    E = V[:, w > 0.5]
    p, Q = linalg.psd_eig(state)
    return [np.sqrt(p[k]) * np.outer(Q[:, k], E[:, j].conj()) for k in np.flatnonzero(p > 0) for j in range(E.shape[1])]


@dataclass(frozen=True, eq=False)
class PetzMap:
    """Petz recovery map, rotated by ``t`` (``t = 0`` is the plain Petz map).

    ``kraus`` has shape ``(r, dim_in, dim_out)`` of the forward channel, i.e.
    it maps the output space of ``phi`` back to its input space.
    """

    kraus: np.ndarray
    sigma: np.ndarray
    phi_sigma: np.ndarray
    support: SupportProjection
    t: float = 0.0

    def __call__(self, X) -> np.ndarray:
        return apply_kraus(self.kraus, np.asarray(X, dtype=complex))

    def tp_defect(self) -> float:
        """``||sum L^dagger L - supp(phi(sigma))||_F``."""
        K = self.kraus
        return float(np.linalg.norm(np.einsum("rki,rkj->ij", K.conj(), K) - self.support.projector))

    def as_channel(self, kernel_state=None) -> QuantumChannel:
        """Full CPTP extension emitting ``kernel_state`` (default ``sigma``) off the support."""
        state = self.sigma if kernel_state is None else as_density_matrix(kernel_state)
        extra = _kernel_kraus(self.support.projector, state)
        return QuantumChannel(np.concatenate([self.kraus, np.array(extra).reshape(-1, *self.kraus.shape[1:])]))


RotatedPetzMap = PetzMap


@dataclass(frozen=True, eq=False)
class AveragedRecoveryChannel:
    """Rotated Petz maps averaged against ``beta0`` and completed on the kernel."""

    choi: ChoiMatrix
    measure_nodes: np.ndarray  # shape (nodes, 2): columns t, weight
    truncation: float
    tail_mass: float
    p_support: SupportProjection
    kernel_state: np.ndarray

    def __call__(self, rho) -> np.ndarray:
        return apply_via_choi(self.choi, rho)

    def as_channel(self) -> QuantumChannel:
        return choi_to_channel(self.choi)


@dataclass(frozen=True, eq=False)
class CocyclePair:
    t: float
    u_t: np.ndarray
    v_t: np.ndarray


def _setup(phi: QuantumChannel, sigma):
    sigma = as_density_matrix(sigma)
    if sigma.shape != (phi.dim_in, phi.dim_in):
        raise DimensionMismatch(f"sigma is {sigma.shape}, channel input is {phi.dim_in}")
    return sigma, apply_channel(phi, sigma)


def rotated_petz(phi: QuantumChannel, sigma, t: float) -> PetzMap:
    sigma, phi_sigma = _setup(phi, sigma)
    left = linalg.matrix_power(sigma, 0.5 - 1j * t)
    right = linalg.matrix_power(phi_sigma, -0.5 + 1j * t)
    kraus = np.einsum("ab,rcb,cd->rad", left, phi.kraus.conj(), right)
    return PetzMap(kraus, sigma, phi_sigma, linalg.support_projection(phi_sigma), float(t))


def petz_map(phi: QuantumChannel, sigma) -> PetzMap:
    return rotated_petz(phi, sigma, 0.0)


def simpson_nodes(T: float, nodes: int) -> np.ndarray:
    """Composite Simpson nodes on ``[-T, T]`` with ``beta0`` weights summing to one.

    The Simpson weights are rescaled to the exact mass ``tanh(pi T)`` inside
    the window, and the tail mass outside it is put on the two endpoint
    nodes, so the averaged map stays exactly trace preserving.
    """
    t = np.linspace(-T, T, nodes)
    h = 2 * T / (nodes - 1)
    coef = np.ones(nodes)
    coef[1:-1:2] = 4.0
    coef[2:-1:2] = 2.0
    w = h / 3.0 * coef * beta0(t)
    w *= beta0_mass(T) / w.sum()
    tail = 1.0 - beta0_mass(T)
    w[0] += tail / 2
    w[-1] += tail / 2
    return np.column_stack([t, w])


def universal_recovery(
    phi: QuantumChannel,
    sigma,
    truncation_T: float = DEFAULT_T,
    nodes: int = DEFAULT_NODES,
    kernel_state=None,
) -> AveragedRecoveryChannel:
    """``X -> int Phi_{sigma,t}(P X P) beta0(t) dt + Tr[(I - P) X] kernel_state``.

    The integral is the composite Simpson sum of the rotated Petz Choi
    matrices over ``nodes`` points in ``[-truncation_T, truncation_T]``.
    Rotation acts on the Petz Choi matrix, written in the eigenbases of
    ``sigma`` and ``phi(sigma)``, as an entrywise phase ``exp(-i t omega)``, so
    the weighted sum over nodes reduces to one phase sum per entry.
    """
    if truncation_T < 3:
        raise InvalidTruncation(f"truncation_T must be >= 3, got {truncation_T}")
    if nodes < 101:
        raise InvalidTruncation(f"need at least 101 nodes, got {nodes}")
    if nodes % 2 == 0:
        raise EvenNodeCount("composite Simpson needs an odd node count")
    sigma, phi_sigma = _setup(phi, sigma)
    din, dout = phi.dim_in, phi.dim_out

    a, A = linalg.psd_eig(sigma)
    b, B = linalg.psd_eig(phi_sigma)
    la = np.where(a > linalg.SUPPORT_RTOL * a[-1], np.log(np.where(a > 0, a, 1.0)), 0.0)
    lb = np.where(b > linalg.SUPPORT_RTOL * b[-1], np.log(np.where(b > 0, b, 1.0)), 0.0)

    base = petz_map(phi, sigma)
    # Kraus operators in eigen-coordinates: L' = A^dagger L B
    Lp = np.einsum("ak,rab,bl->rkl", A.conj(), base.kraus, B)
    vecs = Lp.reshape(Lp.shape[0], -1)
    C0 = vecs.T @ vecs.conj()
    theta = (la[:, None] - lb[None, :]).ravel()
    omega = theta[:, None] - theta[None, :]

    grid = simpson_nodes(truncation_T, nodes)
    phase = np.zeros(omega.shape, dtype=complex)
    for t, w in grid:
        phase += w * np.exp(-1j * t * omega)
    Cp = C0 * phase

    U = np.kron(A, B.conj())
    C_avg = U @ Cp @ U.conj().T

    P = base.support.projector
    state = sigma if kernel_state is None else as_density_matrix(kernel_state)
    C_kernel = np.kron(state, (np.eye(dout) - P).T)
    choi = ChoiMatrix(dout, din, C_avg + C_kernel)
    return AveragedRecoveryChannel(
        choi=choi,
        measure_nodes=grid,
        truncation=float(truncation_T),
        tail_mass=1.0 - beta0_mass(truncation_T),
        p_support=base.support,
        kernel_state=state,
    )


def _cocycle(rho, sigma, t):
    return linalg.matrix_imaginary_power(rho, t) @ linalg.matrix_power(sigma, -1j * t)


def cocycles(rho, sigma, phi: QuantumChannel, t: float) -> CocyclePair:
    """Connes cocycles ``u_t = rho^{it} sigma^{-it}`` and ``v_t = phi(rho)^{it} phi(sigma)^{-it}``.

    ``sigma^{-it}`` is taken on the support of ``sigma`` and ``rho^{it}`` is the
    identity on the kernel of ``rho``, so ``u_0 = supp(sigma)``.
    """
    rho = as_density_matrix(rho)
    sigma, phi_sigma = _setup(phi, sigma)
    if not supported(rho, sigma):
        raise SupportViolation("supp(rho) is not contained in supp(sigma)")
    phi_rho = apply_channel(phi, rho)
    return CocyclePair(float(t), _cocycle(rho, sigma, t), _cocycle(phi_rho, phi_sigma, t))


def cocycle_identity_residual(rho, sigma, s: float, t: float) -> float:
    """``||sigma^{is} u_t sigma^{-is} - u_s^dagger u_{t+s}||_F``."""
    rho = as_density_matrix(rho)
    sigma = as_density_matrix(sigma)
    S = linalg.matrix_power(sigma, 1j * s)
    lhs = S @ _cocycle(rho, sigma, t) @ S.conj().T
    rhs = _cocycle(rho, sigma, s).conj().T @ _cocycle(rho, sigma, t + s)
    return float(np.linalg.norm(lhs - rhs))


def cocycle_residual(rho, sigma, phi: QuantumChannel, t: float) -> float:
    """``||phi^*(v_t) - u_t||_F``; zero for every ``t`` when ``phi`` is sufficient."""
    pair = cocycles(rho, sigma, phi, t)
    return float(np.linalg.norm(apply_adjoint(phi, pair.v_t) - pair.u_t))


@dataclass(frozen=True)
class SufficiencyReport:
    max_l1_gap: float
    max_pe_gap: float
    max_trpos_gap: float
    max_trneg_gap: float
    entropy_gap: float
    petz_recovery_error: float
    rotated_recovery_errors: tuple[tuple[float, float], ...]
    cocycle_residuals: tuple[tuple[float, float], ...]
    reference: str
    threshold: float
    verdict: str


@dataclass(frozen=True)
class RecoveryReport:
    entropy_gap: float
    minus_2log_f: float
    quarter_l1_sq: float
    recovered_trace_distance: float
    epsilon: float
    d_omega: float
    epsilon_bound: float
    chain_slacks: tuple[float, float]
    bound_slack: float
    forward_slack: float
    sigma_recovery_error: float
    tail_mass: float
    kernel_state: str = field(default="sigma")


def _entropy_gap(rho, sigma, phi_rho, phi_sigma) -> float:
    before = relative_entropy_spectral(rho, sigma)
    after = relative_entropy_spectral(phi_rho, phi_sigma)
    if math.isinf(before):
        return math.nan if math.isinf(after) else math.inf
    return before - after


def sufficiency_report(
    rho,
    sigma,
    phi: QuantumChannel,
    grid: Sequence[float] | None = None,
    t_samples: Sequence[float] = DEFAULT_T_SAMPLES,
    threshold: float = DEFAULT_THRESHOLD,
) -> SufficiencyReport:
    """Residuals of every equivalent sufficiency condition for ``(rho, sigma)`` under ``phi``.

    Petz-type residuals use ``sigma`` as reference when ``supp(rho) <= supp(sigma)``
    and the midpoint ``(rho + sigma) / 2`` otherwise; ``reference`` records which.
    The verdict compares the largest finite residual with ``threshold``, with
    a borderline band up to :data:`BORDERLINE_THRESHOLD`.
    """
    rho = as_density_matrix(rho)
    sigma, phi_sigma = _setup(phi, sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"state dimensions differ: {rho.shape} vs {sigma.shape}")
    phi_rho = apply_channel(phi, rho)
    grid = default_grid(rho, sigma) if grid is None else grid
    # every gap curve can peak where the image curves have a kink
    dpi = check_dpi_pointwise(rho, sigma, phi, np.union1d(grid, image_kinks(rho, sigma, phi)))
    gap = _entropy_gap(rho, sigma, phi_rho, phi_sigma)

    if supported(rho, sigma):
        ref, ref_name = sigma, "sigma"
    else:
        ref, ref_name = 0.5 * (rho + sigma), "midpoint"
    petz_err = linalg.trace_norm(petz_map(phi, ref)(phi_rho) - rho)
    rotated = tuple((float(t), linalg.trace_norm(rotated_petz(phi, ref, t)(phi_rho) - rho)) for t in t_samples)
    coc = tuple((float(t), cocycle_residual(rho, ref, phi, t)) for t in t_samples)

    gaps = [float(dpi.l1_slack.max()), float(dpi.pe_slack.max()), float(dpi.tr_pos_slack.max()), float(dpi.tr_neg_slack.max())]
    worst = max(gaps + [petz_err] + ([gap] if math.isfinite(gap) else []))
    if worst <= threshold:
        verdict = "sufficient"
    elif worst <= BORDERLINE_THRESHOLD:
        verdict = "borderline"
    else:
        verdict = "not-sufficient"
    return SufficiencyReport(*gaps, gap, petz_err, rotated, coc, ref_name, threshold, verdict)


def recovery_report(
    rho,
    sigma,
    phi: QuantumChannel,
    grid: Sequence[float] | None = None,
    truncation_T: float = DEFAULT_T,
    nodes: int = DEFAULT_NODES,
) -> RecoveryReport:
    """Recoverability chain for the universal recovery channel.

    Checks ``D(rho||sigma) - D(phi rho||phi sigma) >= -2 log F >= ||.||_1^2 / 4``
    with ``F`` the fidelity between ``rho`` and its recovery, and the bound
    ``||rho - recovered||_1 <= sqrt(2 eps D_Omega)`` where ``eps`` is the L1
    deficiency on ``grid``.
    """
    rho = as_density_matrix(rho)
    sigma, phi_sigma = _setup(phi, sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"state dimensions differ: {rho.shape} vs {sigma.shape}")
    phi_rho = apply_channel(phi, rho)
    grid = default_grid(rho, sigma) if grid is None else np.asarray(grid, dtype=float)

    rec = universal_recovery(phi, sigma, truncation_T, nodes)
    recovered = rec(phi_rho)
    gap = _entropy_gap(rho, sigma, phi_rho, phi_sigma)
    f = fidelity(rho, recovered)
    m2logf = -2.0 * math.log(f) if f > 0 else math.inf
    dist = linalg.trace_norm(rho - recovered)
    quarter = 0.25 * dist**2

    eps = deficiency_epsilon(rho, sigma, phi, grid)
    d_omega = d_max(rho, sigma) + d_max(sigma, rho)
    bound = math.sqrt(2.0 * eps * d_omega) if math.isfinite(d_omega) else math.inf

    # ||rho - s sigma|| <= ||phi rho - s phi sigma|| + ||Lambda phi rho - rho||
    l1, _, _ = curve_arrays(rho, sigma, grid)
    l1i, _, _ = curve_arrays(phi_rho, phi_sigma, grid)
    forward = float(np.min(l1i + dist - l1))

    return RecoveryReport(
        entropy_gap=gap,
        minus_2log_f=m2logf,
        quarter_l1_sq=quarter,
        recovered_trace_distance=dist,
        epsilon=eps,
        d_omega=d_omega,
        epsilon_bound=bound,
        chain_slacks=(gap - m2logf if not math.isnan(gap) else math.nan, m2logf - quarter),
        bound_slack=bound - dist,
        forward_slack=forward,
        sigma_recovery_error=linalg.trace_norm(rec(phi_sigma) - sigma),
        tail_mass=rec.tail_mass,
    )

