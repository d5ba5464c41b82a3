"""Relative entropy by its spectral definition and by an integral over hypothesis-testing curves.

The integral route evaluates

    D(rho||sigma) = int_mu^lam ds/s Tr[(rho - s sigma)_-] + log(lam) + 1 - lam

for ``mu sigma <= rho <= lam sigma``. Using ``Tr[(.)_+] = 1 - s + Tr[(.)_-]``
on ``[1, lam]`` the boundary term is absorbed and the quantity actually
integrated is

    int_mu^1 ds/s Tr[(rho - s sigma)_-] + int_1^lam ds/s Tr[(rho - s sigma)_+]

whose integrands are both nonnegative, so nothing cancels when ``lam`` is
large. Quadrature runs in ``x = log s``. The integrand is analytic except at
the generalized eigenvalues of ``(rho, sigma)``, where an eigenvalue of
``rho - s sigma`` changes sign; those points are used as panel breakpoints.

All logarithms are natural; values are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .errors import DimensionMismatch, QsuffError, QuadratureBudgetExceeded
from .quantum import as_density_matrix

SUPPORT_LEAK_TOL = 1e-9
# lower integration limit when Dmax(sigma||rho) is infinite; truncated mass <= this
S_FLOOR = 1e-9

SCHEMES = ("adaptive-simpson", "fixed-gauss-legendre")


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "adaptive-simpson"
    max_nodes: int = 200_000
    rel_tol: float = 1e-8
    substitution: str = "log-domain"
    # initial Simpson panels per smooth segment (2 * min_panels + 1 nodes)
    min_panels: int = 8
    max_depth: int = 30
    gauss_order: int = 10

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise QsuffError(f"unknown quadrature scheme {self.scheme!r}")
        if self.substitution != "log-domain":
            raise QsuffError("only the log-domain substitution is supported")
        if self.max_nodes < 17:
            raise QsuffError("max_nodes must be >= 17")
        if not 0 < self.rel_tol <= 1e-2:
            raise QsuffError("rel_tol must lie in (0, 1e-2]")


@dataclass(frozen=True)
class DivergenceReport:
    d_spectral: float
    d_integral: float
    quad_error_estimate: float
    d_max_rho_sigma: float
    d_max_sigma_rho: float
    d_omega: float


def _pair(rho, sigma):
    rho = as_density_matrix(rho)
    sigma = as_density_matrix(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"state dimensions differ: {rho.shape} vs {sigma.shape}")
    return rho, sigma


def support_leak(rho, sigma) -> float:
    """``Tr[rho (I - supp(sigma))]``: weight of ``rho`` outside the support of ``sigma``."""
    P = linalg.support_projection(sigma).projector
    return float(np.trace(rho).real - np.trace(rho @ P).real)


def supported(rho, sigma) -> bool:
    return support_leak(rho, sigma) <= SUPPORT_LEAK_TOL


def relative_entropy_spectral(rho, sigma) -> float:
    """``Tr[rho (log rho - log sigma)]``, or ``inf`` if ``supp(rho)`` is not inside ``supp(sigma)``."""
    rho, sigma = _pair(rho, sigma)
    if not supported(rho, sigma):
        return math.inf
    val = np.trace(rho @ linalg.matrix_log(rho)).real - np.trace(rho @ linalg.matrix_log(sigma)).real
    return float(val)


def frenkel_integrand(rho, sigma, t: float) -> float:
    """``Tr[((1 - t) rho + t sigma)_-]``; vanishes for ``t`` in ``[0, 1]``."""
    rho, sigma = _pair(rho, sigma)
    w = np.linalg.eigvalsh((1.0 - t) * rho + t * sigma)
    return float(np.clip(-w, 0.0, None).sum())


def generalized_spectrum(rho, sigma) -> np.ndarray:
    """Eigenvalues of ``sigma^{-1/2} rho sigma^{-1/2}`` on the support of ``sigma``."""
    w, V = linalg.psd_eig(sigma)
    keep = w > linalg.SUPPORT_RTOL * w[-1]
    Vs = V[:, keep] / np.sqrt(w[keep])
    return np.linalg.eigvalsh(linalg.hermitize(Vs.conj().T @ rho @ Vs))


def d_max(rho, sigma) -> float:
    """``log min{lam : rho <= lam sigma}``; ``inf`` on a support violation."""
    rho, sigma = _pair(rho, sigma)
    if not supported(rho, sigma):
        return math.inf
    return float(math.log(generalized_spectrum(rho, sigma)[-1]))


def _trace_parts(rho, sigma, x: np.ndarray) -> np.ndarray:
    """Integrand in ``x = log s``: negative part for ``s <= 1``, positive part above."""
    s = np.exp(x)
    w = np.linalg.eigvalsh(rho[None] - s[:, None, None] * sigma[None])
    neg = np.clip(-w, 0.0, None).sum(axis=1)
    pos = np.clip(w, 0.0, None).sum(axis=1)
    return np.where(x <= 0.0, neg, pos)


class _Counter:
    def __init__(self, f: Callable[[np.ndarray], np.ndarray], budget: int):
        self.f, self.budget, self.n = f, budget, 0

    def __call__(self, x: np.ndarray) -> np.ndarray:
        self.n += x.size
        if self.n > self.budget:
            raise QuadratureBudgetExceeded(f"integrand evaluation budget of {self.budget} exhausted")
        return self.f(x)


def _adaptive_simpson(f, edges: np.ndarray, spec: QuadratureSpec, abs_tol: float) -> tuple[float, float]:
    # initial panels: min_panels per smooth segment
    bounds = [np.linspace(a, b, spec.min_panels + 1) for a, b in zip(edges[:-1], edges[1:])]
    a = np.concatenate([bd[:-1] for bd in bounds])
    b = np.concatenate([bd[1:] for bd in bounds])
    m = 0.5 * (a + b)
    fa, fm, fb = (f(z) for z in (a, m, b))
    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)
    total_len = float((b - a).sum())
    if total_len == 0.0:
        return 0.0, 0.0
    tol = abs_tol * (b - a) / total_len
    depth = np.zeros(a.size, dtype=int)

    pieces: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []  # (left edge, value, |error|)
    while a.size:
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4 * frm + fb)
        err = (left + right - whole) / 15.0
        done = (np.abs(err) <= tol) | (depth >= spec.max_depth)
        pieces.append((a[done], (left + right + err)[done], np.abs(err[done])))
        keep = ~done
        a, m, b, lm, rm = a[keep], m[keep], b[keep], lm[keep], rm[keep]
        fa, fm, fb, flm, frm = fa[keep], fm[keep], fb[keep], flm[keep], frm[keep]
        left, right, tol, depth = left[keep], right[keep], tol[keep], depth[keep]
        # children [a, m] and [m, b]
        a, m, b = np.concatenate([a, m]), np.concatenate([lm, rm]), np.concatenate([m, b])
        fa, fm, fb = np.concatenate([fa, fm]), np.concatenate([flm, frm]), np.concatenate([fm, fb])
        whole = np.concatenate([left, right])
        tol = np.concatenate([tol, tol]) / 2.0
        depth = np.concatenate([depth, depth]) + 1

    edges_all = np.concatenate([p[0] for p in pieces])
    vals = np.concatenate([p[1] for p in pieces])
    errs = np.concatenate([p[2] for p in pieces])
    order = np.argsort(edges_all, kind="stable")
    # left-to-right summation keeps the result independent of refinement order
    return float(np.sum(vals[order])), float(np.sum(errs[order]))


def _gauss_legendre(f, edges: np.ndarray, spec: QuadratureSpec, abs_tol: float) -> tuple[float, float]:
    n = spec.gauss_order
    xl, wl = np.polynomial.legendre.leggauss(n)
    xh, wh = np.polynomial.legendre.leggauss(2 * n)
    a, b = edges[:-1].astype(float), edges[1:].astype(float)
    total_len = float((b - a).sum())
    if total_len == 0.0:
        return 0.0, 0.0
    tol = abs_tol * (b - a) / total_len
    pieces = []
    depth = 0
    while a.size:
        half, mid = 0.5 * (b - a), 0.5 * (a + b)
        lo = (half[:, None] * wl * f((mid[:, None] + half[:, None] * xl).ravel()).reshape(-1, n)).sum(1)
        hi = (half[:, None] * wh * f((mid[:, None] + half[:, None] * xh).ravel()).reshape(-1, 2 * n)).sum(1)
        err = np.abs(hi - lo)
        done = (err <= tol) | (depth >= spec.max_depth)
        pieces.append((a[done], hi[done], err[done]))
        keep = ~done
        a, b, mid, tol = a[keep], b[keep], mid[keep], tol[keep]
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        tol = np.concatenate([tol, tol]) / 2.0
        depth += 1
    edges_all = np.concatenate([p[0] for p in pieces])
    order = np.argsort(edges_all, kind="stable")
    vals = np.concatenate([p[1] for p in pieces])[order]
    errs = np.concatenate([p[2] for p in pieces])[order]
    return float(np.sum(vals)), float(np.sum(errs))


def _integrate(f, lo: float, hi: float, breakpoints, spec: QuadratureSpec) -> tuple[float, float]:
    """Integrate ``f(x)`` over ``[lo, hi]`` with panels split at ``breakpoints``."""
    if hi <= lo:
        return 0.0, 0.0
    inner = [x for x in breakpoints if lo < x < hi and min(x - lo, hi - x) > 1e-12]
    edges = np.unique(np.array([lo, *inner, hi], dtype=float))
    counted = _Counter(f, spec.max_nodes)
    # coarse pass fixes the absolute tolerance scale
    probe = np.linspace(lo, hi, 17)
    scale = abs(np.trapezoid(counted(probe), probe))
    abs_tol = spec.rel_tol * max(1.0, scale)
    if spec.scheme == "adaptive-simpson":
        return _adaptive_simpson(counted, edges, spec, abs_tol)
    return _gauss_legendre(counted, edges, spec, abs_tol)


def negative_part_integral(rho, sigma, lo: float, hi: float, spec: QuadratureSpec | None = None):
    """``int_lo^hi ds/s Tr[(rho - s sigma)_-]`` as ``(value, error_estimate)``."""
    spec = spec or QuadratureSpec()
    rho, sigma = _pair(rho, sigma)

    def f(x):
        w = np.linalg.eigvalsh(rho[None] - np.exp(x)[:, None, None] * sigma[None])
        return np.clip(-w, 0.0, None).sum(axis=1)

    g = generalized_spectrum(rho, sigma) if supported(rho, sigma) else []
    kinks = [math.log(v) for v in g if v > 0]
    return _integrate(f, math.log(lo), math.log(hi), kinks, spec)


def relative_entropy_integral(rho, sigma, spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """Relative entropy from the hypothesis-testing integral.

    Returns:
        ``(value, error_estimate)``; ``(inf, 0.0)`` when ``rho`` is not
        dominated by any multiple of ``sigma``.
    """
    spec = spec or QuadratureSpec()
    rho, sigma = _pair(rho, sigma)
    if not supported(rho, sigma):
        return math.inf, 0.0
    g = generalized_spectrum(rho, sigma)
    lam = float(g[-1])
    d_lo = d_max(sigma, rho)
    mu = S_FLOOR if math.isinf(d_lo) else max(S_FLOOR, math.exp(-d_lo))
    kinks = [0.0] + [math.log(v) for v in g if v > 0]
    lo, hi = math.log(min(mu, 1.0)), math.log(max(lam, 1.0))
    return _integrate(lambda x: _trace_parts(rho, sigma, x), lo, hi, kinks, spec)


def divergence_report(rho, sigma, spec: QuadratureSpec | None = None) -> DivergenceReport:
    rho, sigma = _pair(rho, sigma)
    d_int, err = relative_entropy_integral(rho, sigma, spec)
    up, down = d_max(rho, sigma), d_max(sigma, rho)
    return DivergenceReport(
        d_spectral=relative_entropy_spectral(rho, sigma),
        d_integral=d_int,
        quad_error_estimate=err,
        d_max_rho_sigma=up,
        d_max_sigma_rho=down,
        d_omega=up + down,
    )
