import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsuff import hypothesis as ht
from qsuff import quantum
from qsuff.divergences import d_max
from qsuff.errors import DimensionMismatch, EmptyGrid, InvalidChannel, InvalidLambda
from qsuff.random import default_rng, rand_channel, rand_density_matrix, rand_effect, rand_unitary

from conftest import RHO_DIAG, SIGMA_FLAT, SIGMA_TILTED


def noisy_transpose(p):
    """Positive, trace-preserving, not completely positive for p > 1/3."""
    return lambda X: p * X.T + (1 - p) * np.trace(X) * np.eye(X.shape[0]) / X.shape[0]


def test_noisy_transpose_is_not_cp():
    p, d = 0.8, 2
    choi = sum(np.kron(noisy_transpose(p)(np.outer(e_i, e_j)), np.outer(e_i, e_j))
               for e_i in np.eye(d) for e_j in np.eye(d))
    assert np.linalg.eigvalsh(choi)[0] < -0.1


def test_bayes_error_examples(rng):
    rho, sigma = rand_density_matrix(2, rng), rand_density_matrix(2, rng)
    assert ht.bayes_error_of_test(rho, sigma, np.zeros((2, 2)), 0.3) == pytest.approx(0.7)
    assert ht.bayes_error_of_test(rho, sigma, np.eye(2), 0.3) == pytest.approx(0.3)
    assert ht.bayes_error_of_test(rho, rho, rand_effect(2, rng), 0.5) == pytest.approx(0.5)


def test_bayes_error_errors(rng):
    rho = rand_density_matrix(2, rng)
    with pytest.raises(InvalidLambda):
        ht.bayes_error_of_test(rho, rho, np.eye(2), 1.5)
    with pytest.raises(DimensionMismatch):
        ht.bayes_error_of_test(rho, rho, np.eye(3), 0.5)
    with pytest.raises(DimensionMismatch):
        ht.bayes_error_of_test(rho, np.eye(3) / 3, np.eye(2), 0.5)


def test_optimal_test_equal_states(rng):
    rho = rand_density_matrix(3, rng)
    dec = ht.optimal_test(rho, rho, 1.0)
    assert dec.l1 == pytest.approx(0.0, abs=1e-12)
    assert dec.error == pytest.approx(0.5)
    assert dec.p_zero.rank == 3


def test_optimal_test_diagonal_pair():
    dec = ht.optimal_test(RHO_DIAG, SIGMA_FLAT, 1.0)
    assert dec.tr_neg == pytest.approx(0.25)
    assert dec.error == pytest.approx(0.375)
    assert dec.lam == 0.5
    assert np.allclose(dec.test, np.diag([1, 0]))


def test_optimal_test_invariants(rng):
    for _ in range(100):
        d = int(rng.integers(2, 6))
        rho, sigma = rand_density_matrix(d, rng), rand_density_matrix(d, rng)
        s = float(rng.uniform(0, 5))
        dec = ht.optimal_test(rho, sigma, s)
        total = dec.p_plus.projector + dec.p_minus.projector + dec.p_zero.projector
        assert np.linalg.norm(total - np.eye(d)) <= 1e-9
        assert abs(dec.tr_pos - dec.tr_neg - (1 - s)) <= 1e-9
        lam = s / (1 + s)
        # three expressions of the optimal error agree
        attained = ht.bayes_error_of_test(rho, sigma, dec.test, lam)
        closed = ht.optimal_bayes_error(rho, sigma, lam)
        assert abs(attained - dec.error) <= 1e-10
        assert abs(closed - dec.error) <= 1e-10


def test_optimal_test_degenerate_threshold_goes_to_zero_part():
    dec = ht.optimal_test(RHO_DIAG, np.diag([0.75, 0.25]), 1.0)
    assert dec.p_zero.rank == 2 and dec.p_plus.rank == 0


def test_optimal_test_rejects_negative_s():
    with pytest.raises(InvalidLambda):
        ht.optimal_test(RHO_DIAG, SIGMA_FLAT, -1.0)


def test_optimal_error_endpoints(rng):
    rho, sigma = rand_density_matrix(2, rng), rand_density_matrix(2, rng)
    assert ht.optimal_bayes_error(rho, sigma, 1.0) == 0.0
    assert ht.optimal_bayes_error(rho, sigma, 0.0) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(InvalidLambda):
        ht.optimal_bayes_error(rho, sigma, -0.1)


def test_neyman_pearson_brute_force(rng):
    rho, sigma = rand_density_matrix(2, rng), rand_density_matrix(2, rng)
    for lam in (0.2, 0.5, 0.8):
        best = ht.optimal_bayes_error(rho, sigma, lam)
        tried = min(ht.bayes_error_of_test(rho, sigma, rand_effect(2, rng), lam) for _ in range(1000))
        assert tried >= best - 1e-12


def test_sweep_equal_states(rng):
    rho = rand_density_matrix(3, rng)
    s = np.linspace(0, 3, 31)
    pts = ht.sweep_curves(rho, rho, s)
    assert np.allclose([p.l1 for p in pts], np.abs(1 - s), atol=1e-12)


def test_sweep_at_zero(rng):
    (p,) = ht.sweep_curves(rand_density_matrix(3, rng), rand_density_matrix(3, rng), [0.0])
    assert p.l1 == pytest.approx(1.0) and p.tr_neg == pytest.approx(0.0, abs=1e-15)


def test_sweep_diagonal_pair():
    pts = ht.sweep_curves(RHO_DIAG, SIGMA_FLAT, [0.5, 1.0, 2.0])
    assert np.allclose([p.tr_neg for p in pts], [0.0, 0.25, 1.0], atol=1e-15)


def test_sweep_invariants(rng):
    rho, sigma = rand_density_matrix(3, rng), rand_density_matrix(3, rng)
    s = np.sort(rng.uniform(0, 10, size=200))
    pts = ht.sweep_curves(rho, sigma, s)
    l1 = np.array([p.l1 for p in pts])
    assert np.all(np.abs(np.diff(l1)) <= np.diff(s) + 1e-12)
    for p in pts:
        lam = p.s / (1 + p.s)
        assert abs(p.pe - 0.5 * (1 - (1 - lam) * p.l1)) <= 1e-10
        assert abs(p.tr_pos - p.tr_neg - (1 - p.s)) <= 1e-9


def test_sweep_grid_errors():
    with pytest.raises(EmptyGrid):
        ht.sweep_curves(RHO_DIAG, SIGMA_FLAT, [])
    with pytest.raises(InvalidLambda):
        ht.sweep_curves(RHO_DIAG, SIGMA_FLAT, [-1.0])


def test_default_grid_covers_interesting_range():
    g = ht.default_grid(RHO_DIAG, SIGMA_FLAT)
    assert g[0] == 0.0 and 1.0 in g
    assert g[1] == pytest.approx(0.5) and g[-1] == pytest.approx(1.5)
    assert len(g) == 513 + 2


def test_default_grid_infinite_dmax():
    g = ht.default_grid(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    assert g[1] == ht.S_FLOOR and g[-1] == ht.S_CEILING


def test_deficiency_identity_and_unitary(rng):
    rho, sigma = rand_density_matrix(3, rng), rand_density_matrix(3, rng)
    grid = ht.default_grid(rho, sigma)
    assert ht.deficiency_epsilon(rho, sigma, quantum.identity_channel(3), grid) <= 1e-12
    U = quantum.unitary_channel(rand_unitary(3, rng))
    assert ht.deficiency_epsilon(rho, sigma, U, grid) <= 1e-10


def test_deficiency_depolarizing_grid_refinement():
    phi = quantum.depolarizing_channel(2, 0.5)
    eps = ht.deficiency_epsilon(RHO_DIAG, SIGMA_TILTED, phi, ht.default_grid(RHO_DIAG, SIGMA_TILTED))
    fine = ht.deficiency_epsilon(RHO_DIAG, SIGMA_TILTED, phi, ht.default_grid(RHO_DIAG, SIGMA_TILTED, 5130))
    assert eps > 0.1
    assert abs(eps - fine) <= 1e-4


def test_deficiency_covers_upper_threshold():
    # for s beyond exp(D_max(rho||sigma)) both curves are affine and the gap stops growing
    phi = quantum.depolarizing_channel(2, 0.5)
    top = np.exp(d_max(RHO_DIAG, SIGMA_TILTED))
    grid = ht.default_grid(RHO_DIAG, SIGMA_TILTED)
    beyond = np.linspace(top, 10 * top, 50)
    assert ht.deficiency_epsilon(RHO_DIAG, SIGMA_TILTED, phi, beyond) <= ht.deficiency_epsilon(
        RHO_DIAG, SIGMA_TILTED, phi, grid) + 1e-12


def test_dpi_identity_zero_slack(rng):
    rho, sigma = rand_density_matrix(2, rng), rand_density_matrix(2, rng)
    rep = ht.check_dpi_pointwise(rho, sigma, quantum.identity_channel(2), ht.default_grid(rho, sigma))
    assert np.abs(rep.l1_slack).max() <= 1e-12
    assert abs(rep.min_slack) <= 1e-12


def test_dpi_random_channels(rng):
    for _ in range(50):
        rho, sigma = rand_density_matrix(2, rng), rand_density_matrix(2, rng)
        rep = ht.check_dpi_pointwise(rho, sigma, rand_channel(2, 2, rng), ht.default_grid(rho, sigma))
        assert rep.min_slack >= -1e-9


def test_dpi_partial_trace_on_products(rng):
    tau = rand_density_matrix(2, rng)
    rho, sigma = rand_density_matrix(2, rng), rand_density_matrix(2, rng)
    grid = ht.default_grid(rho, sigma)
    rep = ht.check_dpi_pointwise(np.kron(rho, tau), np.kron(sigma, tau), quantum.partial_trace_channel(2, 2), grid)
    for a in (rep.l1_slack, rep.tr_pos_slack, rep.tr_neg_slack, rep.pe_slack):
        assert np.abs(a).max() <= 1e-9


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.floats(0.34, 1.0))
def test_dpi_positive_but_not_cp_map(seed, p):
    rng = default_rng(seed)
    rho, sigma = rand_density_matrix(2, rng), rand_density_matrix(2, rng)
    rep = ht.check_dpi_pointwise(rho, sigma, noisy_transpose(p), ht.default_grid(rho, sigma, 129))
    assert rep.min_slack >= -1e-9


def test_image_rejects_non_positive_callable():
    from qsuff.errors import InvalidState

    with pytest.raises(InvalidState):
        ht.image(lambda X: X - 0.6 * np.eye(2), RHO_DIAG)
    with pytest.raises(InvalidChannel):
        quantum.QuantumChannel(np.array([np.eye(2), np.eye(2)]))
