"""Binary quantum hypothesis testing: sigma (null) against rho (alternative).

A test is an effect ``0 <= M <= I``; ``Tr[omega M]`` is the probability of
rejecting the null when the true state is ``omega``. For a prior weight
``lam`` on the null the likelihood-ratio threshold is ``s = lam / (1 - lam)``,
and every error quantity below is a function of the spectrum of ``rho - s sigma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from . import linalg
from .divergences import d_max, generalized_spectrum
from .errors import DimensionMismatch, EmptyGrid, InvalidLambda
from .linalg import SupportProjection
from .quantum import QuantumChannel, apply_channel, as_density_matrix, as_effect

# eigenvalues of rho - s sigma this close to zero are assigned to P_{s,0}
ZERO_EIG_TOL = 1e-12
DEFAULT_GRID_COUNT = 513
# grid endpoints used when a max-relative entropy is infinite
S_FLOOR = 1e-6
S_CEILING = 1e6

PositiveMap = Union[QuantumChannel, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class OptimalTestDecomposition:
    s: float
    p_plus: SupportProjection
    p_minus: SupportProjection
    p_zero: SupportProjection
    tr_pos: float
    tr_neg: float

    @property
    def lam(self) -> float:
        return self.s / (1.0 + self.s)

    @property
    def l1(self) -> float:
        return self.tr_pos + self.tr_neg

    @property
    def test(self) -> np.ndarray:
        """Canonical Bayes optimal test ``M = P_{s,+}``."""
        return self.p_plus.projector

    @property
    def error(self) -> float:
        """Optimal Bayes error at ``lam = s / (1 + s)``."""
        return 0.5 * (1.0 - self.l1 / (1.0 + self.s))


@dataclass(frozen=True)
class CurvePoint:
    s: float
    l1: float
    tr_pos: float
    tr_neg: float
    pe: float


@dataclass(frozen=True)
class DPIReport:
    """Per-threshold slacks of the monotonicity inequalities.

    Every slack is ``(value that should be larger) - (value that should be
    smaller)``, so the data processing inequality says all entries are >= 0.
    """

    s: np.ndarray
    l1_slack: np.ndarray
    tr_pos_slack: np.ndarray
    tr_neg_slack: np.ndarray
    pe_slack: np.ndarray

    @property
    def min_slack(self) -> float:
        return float(min(a.min() for a in (self.l1_slack, self.tr_pos_slack, self.tr_neg_slack, self.pe_slack)))


def _pair(rho, sigma):
    rho = as_density_matrix(rho)
    sigma = as_density_matrix(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"state dimensions differ: {rho.shape} vs {sigma.shape}")
    return rho, sigma


def image(phi: PositiveMap, rho) -> np.ndarray:
    """Apply a channel, or any positive trace-preserving callable, to a state."""
    if isinstance(phi, QuantumChannel):
        return apply_channel(phi, rho)
    return as_density_matrix(phi(np.asarray(rho, dtype=complex)), atol=1e-8)


def curve_arrays(rho, sigma, s) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(||rho - s sigma||_1, Tr[(.)_+], Tr[(.)_-])`` for an array of thresholds.

    No validation; ``rho`` and ``sigma`` must already be Hermitian arrays.
    """
    s = np.asarray(s, dtype=float)
    w = np.linalg.eigvalsh(rho[None] - s[:, None, None] * sigma[None])
    tr_pos = np.clip(w, 0, None).sum(axis=1)
    tr_neg = np.clip(-w, 0, None).sum(axis=1)
    return tr_pos + tr_neg, tr_pos, tr_neg


def bayes_error_of_test(rho, sigma, M, lam: float) -> float:
    """``lam Tr[sigma M] + (1 - lam) Tr[rho (I - M)]``."""
    if not 0.0 <= lam <= 1.0:
        raise InvalidLambda(f"prior weight must lie in [0, 1], got {lam}")
    rho, sigma = _pair(rho, sigma)
    M = as_effect(M)
    if M.shape != rho.shape:
        raise DimensionMismatch(f"effect is {M.shape}, states are {rho.shape}")
    alpha = np.trace(sigma @ M).real
    beta = 1.0 - np.trace(rho @ M).real
    return float(lam * alpha + (1.0 - lam) * beta)


def optimal_test(rho, sigma, s: float) -> OptimalTestDecomposition:
    """Neyman-Pearson decomposition of ``rho - s sigma`` into +, - and zero eigenspaces."""
    if not s >= 0:
        raise InvalidLambda(f"threshold s must be >= 0, got {s}")
    rho, sigma = _pair(rho, sigma)
    w, V = linalg.hermitian_eig(rho - s * sigma)

    def proj(mask):
        Vk = V[:, mask]
        return SupportProjection(Vk @ Vk.conj().T, int(mask.sum()), ZERO_EIG_TOL)

    plus = w > ZERO_EIG_TOL
    minus = w < -ZERO_EIG_TOL
    zero = ~(plus | minus)
    return OptimalTestDecomposition(
        s=float(s),
        p_plus=proj(plus),
        p_minus=proj(minus),
        p_zero=proj(zero),
        tr_pos=float(w[plus].sum()),
        tr_neg=float(-w[minus].sum()),
    )


def optimal_bayes_error(rho, sigma, lam: float) -> float:
    """Minimal Bayes error ``1/2 (1 - (1 - lam) ||rho - s sigma||_1)``.

    ``lam = 1`` is the limit ``s -> inf``, where the test ``M = 0`` makes no
    error, so the value is 0.
    """
    if not 0.0 <= lam <= 1.0:
        raise InvalidLambda(f"prior weight must lie in [0, 1], got {lam}")
    rho, sigma = _pair(rho, sigma)
    if lam == 1.0:
        return 0.0
    s = lam / (1.0 - lam)
    l1 = linalg.trace_norm(rho - s * sigma)
    return 0.5 * (1.0 - (1.0 - lam) * l1)


def _check_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=float).ravel()
    if g.size == 0:
        raise EmptyGrid("threshold grid is empty")
    if np.any(~np.isfinite(g)) or np.any(g < 0):
        raise InvalidLambda("grid values must be finite and >= 0")
    return g


def sweep_curves(rho, sigma, grid: Sequence[float]) -> list[CurvePoint]:
    rho, sigma = _pair(rho, sigma)
    s = _check_grid(grid)
    l1, tp, tn = curve_arrays(rho, sigma, s)
    pe = 0.5 * (1.0 - l1 / (1.0 + s))
    return [CurvePoint(float(a), float(b), float(c), float(d), float(e)) for a, b, c, d, e in zip(s, l1, tp, tn, pe)]


def default_grid(rho, sigma, count: int = DEFAULT_GRID_COUNT) -> np.ndarray:
    """Geometric grid on ``[exp(-Dmax(sigma||rho)), exp(Dmax(rho||sigma))]`` plus 0 and 1.

    Outside that interval ``rho - s sigma`` is semidefinite, so every curve is
    affine in ``s`` there and no gap can appear. Infinite max-relative
    entropies fall back to :data:`S_FLOOR` and :data:`S_CEILING`.
    """
    d_up = d_max(rho, sigma)
    d_lo = d_max(sigma, rho)
    hi = S_CEILING if math.isinf(d_up) else math.exp(d_up)
    lo = S_FLOOR if math.isinf(d_lo) else max(S_FLOOR, math.exp(-d_lo))
    lo = min(lo, hi)
    pts = np.geomspace(lo, hi, count)
    return np.unique(np.concatenate([[0.0, 1.0], pts]))


def check_dpi_pointwise(rho, sigma, phi: PositiveMap, grid: Sequence[float]) -> DPIReport:
    """Monotonicity slacks of the L1 curve, its parts and the Bayes error under ``phi``."""
    rho, sigma = _pair(rho, sigma)
    s = _check_grid(grid)
    l1, tp, tn = curve_arrays(rho, sigma, s)
    l1i, tpi, tni = curve_arrays(image(phi, rho), image(phi, sigma), s)
    return DPIReport(
        s=s,
        l1_slack=l1 - l1i,
        tr_pos_slack=tp - tpi,
        tr_neg_slack=tn - tni,
        # P_e = 1/2 (1 - l1 / (1 + s)) can only grow under phi
        pe_slack=0.5 * (l1 - l1i) / (1.0 + s),
    )


def image_kinks(rho, sigma, phi: PositiveMap) -> np.ndarray:
    """Thresholds where an eigenvalue of ``phi(rho) - s phi(sigma)`` crosses zero.

    The image L1 curve has a concave kink there, so the L1 gap can peak at one
    of these points; a grid only reaches them to within its spacing.
    """
    w = generalized_spectrum(image(phi, rho), image(phi, sigma))
    return w[w > 0]


def deficiency_epsilon(rho, sigma, phi: PositiveMap, grid: Sequence[float]) -> float:
    """Smallest ``eps`` with ``||phi(rho) - s phi(sigma)||_1 >= ||rho - s sigma||_1 - eps`` on the grid.

    The grid is augmented with :func:`image_kinks`, so the result does not
    depend on the grid spacing to first order.
    """
    rho, sigma = _pair(rho, sigma)
    s = np.union1d(_check_grid(grid), image_kinks(rho, sigma, phi))
    report = check_dpi_pointwise(rho, sigma, phi, s)
    return max(0.0, float(report.l1_slack.max()))
