import os

import numpy as np
import pytest

from qsuff import linalg
from qsuff.random import default_rng

# every eigendecomposition checks its residual and orthonormality bounds in tests
linalg.CHECK_INVARIANTS = True

RHO_DIAG = np.diag([0.75, 0.25]).astype(complex)
SIGMA_FLAT = np.diag([0.5, 0.5]).astype(complex)
# non-commuting with RHO_DIAG
SIGMA_TILTED = np.array([[0.5, 0.2], [0.2, 0.5]], dtype=complex)
KET0 = np.diag([1.0, 0.0]).astype(complex)
KET1 = np.diag([0.0, 1.0]).astype(complex)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return default_rng()


@pytest.fixture
def record_criterion():
    """Append a PASS/FAIL line for one acceptance criterion to the terminal summary."""

    def record(number: int, ok: bool, detail: str) -> str:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} | {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def seed_env(monkeypatch):
    monkeypatch.delenv("QSUFF_SEED", raising=False)
    return os.environ


def block_state(rng, d1: int, d2: int) -> np.ndarray:
    """Full-rank state commuting with the projector onto the first ``d1`` coordinates."""
    from qsuff.random import rand_density_matrix

    a = rng.uniform(0.2, 0.8)
    out = np.zeros((d1 + d2, d1 + d2), dtype=complex)
    out[:d1, :d1] = a * rand_density_matrix(d1, rng)
    out[d1:, d1:] = (1 - a) * rand_density_matrix(d2, rng)
    return out


def sufficient_fixtures(rng, count: int = 3):
    """``(name, rho, sigma, phi)`` triples where ``phi`` is exactly sufficient for the pair."""
    from qsuff import quantum
    from qsuff.random import rand_density_matrix, rand_unitary

    out = []
    for _ in range(count):
        rho, sigma = rand_density_matrix(2, rng), rand_density_matrix(2, rng)
        out.append(("unitary", rho, sigma, quantum.unitary_channel(rand_unitary(2, rng))))
        rho, sigma = rand_density_matrix(2, rng), rand_density_matrix(2, rng)
        tau = rand_density_matrix(2, rng)
        out.append(("attach-ancilla", rho, sigma, quantum.attach_ancilla_channel(2, tau)))
        P = np.diag([1.0, 1.0, 0.0]).astype(complex)
        pin = quantum.pinching_channel([P, np.eye(3) - P])
        out.append(("pinching", block_state(rng, 2, 1), block_state(rng, 2, 1), pin))
    return out


def depolarizing_fixture():
    from qsuff import quantum

    return RHO_DIAG, SIGMA_TILTED, quantum.depolarizing_channel(2, 0.5)
