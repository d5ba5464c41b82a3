"""Seeded random states, effects and channels for tests and demos."""

from __future__ import annotations

import os

import numpy as np

from .quantum import QuantumChannel

DEFAULT_SEED = 42


def default_rng(seed: int | None = None) -> np.random.Generator:
    """Generator seeded from ``seed``, else ``$QSUFF_SEED``, else 42."""
    if seed is None:
        seed = int(os.environ.get("QSUFF_SEED", DEFAULT_SEED))
    return np.random.default_rng(seed)


def _ginibre(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def rand_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    G = _ginibre(rng, d, d)
    return (G + G.conj().T) / 2


def rand_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    Q, R = np.linalg.qr(_ginibre(rng, d, d))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def rand_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Hilbert-Schmidt random state; full rank unless ``rank`` is given."""
    G = _ginibre(rng, d, d if rank is None else rank)
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def rand_pure_state(d: int, rng: np.random.Generator) -> np.ndarray:
    return rand_density_matrix(d, rng, rank=1)


def rand_effect(d: int, rng: np.random.Generator) -> np.ndarray:
    U = rand_unitary(d, rng)
    return (U * rng.uniform(0, 1, size=d)) @ U.conj().T


def rand_channel(d_in: int, d_out: int, rng: np.random.Generator, n_kraus: int | None = None) -> QuantumChannel:
    """Channel from a Haar-like random isometry ``C^d_in -> C^d_out (x) C^r``."""
    r = d_in * d_out if n_kraus is None else n_kraus
    Q, _ = np.linalg.qr(_ginibre(rng, d_out * r, d_in))
    return QuantumChannel(Q.reshape(d_out, r, d_in).transpose(1, 0, 2))
