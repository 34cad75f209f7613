import numpy as np
import numpy.testing as npt
import pytest

from flrd.basis import build_basis, gram_matrices
from flrd.curves import Curve, FunctionalDataset, center
from flrd.errors import (
    BasisMismatchError,
    DegenerateDesignWarning,
    EmptyDataError,
    InvalidPenaltyError,
    TooFewObservationsError,
)
from flrd.estimator import (
    fit_flr_ridge,
    fit_flrd,
    make_unidentifiable,
    msep,
    pair_contribution,
    predict,
)
from flrd.simulate import SyntheticSpec, generate, polynomial_decay, smooth_truth

from oracles import covariances_by_loops, quad, random_dataset, schur_by_inverse, spline

GRAMS8 = gram_matrices(build_basis((0, 1), k=8, degree=3))


def _synthetic(n, seed=0, sigma=0.0, grams=GRAMS8):
    lam = polynomial_decay(grams.k_W)
    phi, psi = smooth_truth(grams, lam)
    return generate(SyntheticSpec(n, lam, phi, psi, sigma, seed), grams)


def test_zero_responses_give_zero_fit():
    rng = np.random.default_rng(0)
    coefs, _ = random_dataset(rng, GRAMS8.basis, 15)
    fit = fit_flrd(FunctionalDataset(GRAMS8.basis, coefs, np.zeros(15)), GRAMS8, 0.1, 0.1)
    npt.assert_allclose(fit.phi.coefs, 0.0, atol=1e-14)
    npt.assert_allclose(fit.psi.coefs, 0.0, atol=1e-14)


def test_noiseless_recovery_in_and_out_of_sample():
    train, y_star = _synthetic(200, seed=1)
    test, y_test = _synthetic(200, seed=2)
    fit = fit_flrd(train, GRAMS8, 1e-8, 1e-8)
    assert np.sqrt(np.mean((fit.predict(train) - y_star) ** 2)) <= 1e-3
    assert np.sqrt(np.mean((fit.predict(test) - y_test) ** 2)) <= 1e-3


def _dense_oracle_fit(grams, data, alpha, beta):
    G, Gp, Gps, Gpp, d, dp = covariances_by_loops(grams, data.coefs, data.responses)
    S_phi, u_phi, S_psi, u_psi = schur_by_inverse(G, Gp, Gps, Gpp, d, dp, alpha)
    phi = np.linalg.inv(S_phi + beta * np.eye(len(u_phi))) @ u_phi
    psi = np.linalg.inv(S_psi + beta * np.eye(len(u_psi))) @ u_psi
    return grams.U_W @ phi, grams.U_L @ psi


def test_fit_matches_dense_oracle():
    grams = gram_matrices(build_basis((0, 1), k=5, degree=3))
    rng = np.random.default_rng(3)
    coefs, y = random_dataset(rng, grams.basis, 5)
    data, _, _ = center(FunctionalDataset(grams.basis, coefs, y))
    fit = fit_flrd(data, grams, 0.05, 0.2)
    phi, psi = _dense_oracle_fit(grams, data, 0.05, 0.2)
    npt.assert_allclose(fit.phi.coefs, phi, atol=1e-10)
    npt.assert_allclose(fit.psi.coefs, psi, atol=1e-10)


def test_equal_penalties_are_joint_ridge():
    # block elimination of the joint normal equations gives the Schur systems with beta = alpha
    rng = np.random.default_rng(4)
    coefs, y = random_dataset(rng, GRAMS8.basis, 30)
    data, _, _ = center(FunctionalDataset(GRAMS8.basis, coefs, y))
    alpha = 0.03
    X = data.coefs @ GRAMS8.R_W.T
    Xd = data.deriv_coefs @ GRAMS8.R_L.T
    Z = np.hstack([X, Xd])
    coef = np.linalg.solve(Z.T @ Z / data.n + alpha * np.eye(Z.shape[1]), Z.T @ data.responses / data.n)
    fit = fit_flrd(data, GRAMS8, alpha, alpha)
    npt.assert_allclose(GRAMS8.R_W @ fit.phi.coefs, coef[: GRAMS8.k_W], atol=1e-10)
    npt.assert_allclose(GRAMS8.R_L @ fit.psi.coefs, coef[GRAMS8.k_W :], atol=1e-10)


def test_predict_matches_quadrature():
    rng = np.random.default_rng(5)
    basis = GRAMS8.basis
    coefs, y = random_dataset(rng, basis, 12)
    fit = fit_flrd(FunctionalDataset(basis, coefs, y), GRAMS8, 0.1, 0.01)
    x = Curve(basis, rng.standard_normal(basis.k))
    dx = x.coefs - fit.mean_curve.coefs
    s_phi, s_x = spline(basis, fit.phi.coefs), spline(basis, dx)
    s_psi = spline(GRAMS8.deriv_basis, fit.psi.coefs)
    ds_phi, ds_x = s_phi.derivative(), s_x.derivative()
    expected = fit.mean_response + quad(lambda s: s_phi(s) * s_x(s) + ds_phi(s) * ds_x(s) + s_psi(s) * ds_x(s), basis)
    assert predict(fit, x) == pytest.approx(expected, abs=1e-10)
    assert pair_contribution(fit.phi, fit.psi, Curve(basis, dx)) == pytest.approx(expected - fit.mean_response, abs=1e-10)


def test_predict_at_mean_and_zero_fit():
    rng = np.random.default_rng(6)
    coefs, y = random_dataset(rng, GRAMS8.basis, 10)
    fit = fit_flrd(FunctionalDataset(GRAMS8.basis, coefs, y), GRAMS8, 0.1, 0.1)
    assert fit.predict(fit.mean_curve) == pytest.approx(y.mean(), abs=1e-12)
    flat = fit_flrd(FunctionalDataset(GRAMS8.basis, coefs, np.full(10, 3.0)), GRAMS8, 0.1, 0.1)
    npt.assert_allclose(flat.predict(coefs), 3.0, atol=1e-12)


def test_predict_basis_mismatch():
    fit = fit_flrd(_synthetic(20)[0], GRAMS8, 0.1, 0.1)
    with pytest.raises(BasisMismatchError):
        fit.predict(Curve(build_basis((0, 1), k=9, degree=3), np.zeros(9)))
    with pytest.raises(BasisMismatchError):
        fit.predict(np.zeros((2, 7)))


def test_ridge_matches_dense_oracle():
    rng = np.random.default_rng(7)
    basis = GRAMS8.basis
    coefs, y = random_dataset(rng, basis, 25)
    fit = fit_flr_ridge(FunctionalDataset(basis, coefs, y), GRAMS8, 0.01)
    C = coefs - coefs.mean(axis=0)
    yc = y - y.mean()
    # minimize 1/n ||yc - C G_L theta||^2 + beta theta' G_L theta
    A = GRAMS8.G_L @ C.T @ C @ GRAMS8.G_L / 25 + 0.01 * GRAMS8.G_L
    theta = np.linalg.solve(A, GRAMS8.G_L @ C.T @ yc / 25)
    npt.assert_allclose(fit.theta.coefs, theta, atol=1e-8)


def test_ridge_recovers_l2_functional():
    # y = int x * theta with theta in the span; derivative-free truth
    rng = np.random.default_rng(8)
    basis = GRAMS8.basis
    theta = rng.standard_normal(basis.k)
    coefs = rng.standard_normal((300, basis.k))
    y = coefs @ GRAMS8.G_L @ theta
    fit = fit_flr_ridge(FunctionalDataset(basis, coefs, y), GRAMS8, 1e-10)
    npt.assert_allclose(fit.theta.coefs, theta, atol=1e-5)


def test_msep_cases():
    data, _ = _synthetic(40, seed=9)
    zero = fit_flrd(FunctionalDataset(data.basis, data.coefs, np.zeros(40)), GRAMS8, 0.1, 0.1)
    shifted = FunctionalDataset(data.basis, data.coefs, np.full(40, 2.0))
    assert msep(zero, shifted) == pytest.approx(4.0, abs=1e-12)
    assert msep(zero, FunctionalDataset(data.basis, data.coefs, np.zeros(40))) == pytest.approx(0.0, abs=1e-24)
    y = np.array([1.0, -1.0, 0.5])
    assert msep(zero, FunctionalDataset(data.basis, data.coefs[:3], y)) == pytest.approx(np.mean(y**2))
    with pytest.raises(EmptyDataError):
        msep(zero, FunctionalDataset(data.basis, np.zeros((0, 8)), np.zeros(0)))


def test_null_space_pair_is_invisible():
    rng = np.random.default_rng(10)
    for _ in range(5):
        psi = Curve(GRAMS8.deriv_basis, rng.standard_normal(GRAMS8.k_L))
        phi = make_unidentifiable(psi, GRAMS8)
        assert make_unidentifiable(psi).coefs == pytest.approx(phi.coefs)
        for _ in range(20):
            x = Curve(GRAMS8.basis, rng.standard_normal(GRAMS8.k_W))
            assert abs(pair_contribution(phi, psi, x)) <= 1e-9


def test_adjoint_identity():
    # <D* psi, x>_W == <psi, x'>_L
    rng = np.random.default_rng(11)
    psi = Curve(GRAMS8.deriv_basis, rng.standard_normal(GRAMS8.k_L))
    adj = -make_unidentifiable(psi, GRAMS8).coefs
    x = rng.standard_normal(GRAMS8.k_W)
    lhs = adj @ GRAMS8.G_W @ x
    rhs = psi.coefs @ GRAMS8.G_L_deriv @ (GRAMS8.D_coef @ x)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_fit_is_deterministic():
    data, _ = _synthetic(50, seed=12, sigma=0.1)
    a = fit_flrd(data, GRAMS8, 0.1, 0.2)
    b = fit_flrd(data, GRAMS8, 0.1, 0.2)
    npt.assert_array_equal(a.phi.coefs, b.phi.coefs)
    npt.assert_array_equal(a.psi.coefs, b.psi.coefs)


def test_shrinkage_in_beta():
    data, _ = _synthetic(60, seed=13, sigma=0.1)
    norms = []
    for beta in (1e-3, 1e-2, 1e-1, 1.0, 10.0):
        fit = fit_flrd(data, GRAMS8, 0.1, beta)
        norms.append(np.sqrt(GRAMS8.R_W @ fit.phi.coefs @ (GRAMS8.R_W @ fit.phi.coefs)))
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))


def test_variance_decomposition():
    sigma = 0.5
    train, _ = _synthetic(2000, seed=14, sigma=sigma)
    test, y_star = _synthetic(2000, seed=15, sigma=sigma)
    fit = fit_flrd(train, GRAMS8, 0.01, 0.01)
    y_hat = fit.predict(test)
    lhs = np.mean((y_hat - test.responses) ** 2)
    rhs = np.mean((y_hat - y_star) ** 2) + sigma**2
    assert abs(lhs - rhs) <= 0.1 * rhs


def test_degenerate_design_warns():
    coefs = np.tile(np.arange(8.0), (4, 1))
    with pytest.warns(DegenerateDesignWarning):
        fit = fit_flrd(FunctionalDataset(GRAMS8.basis, coefs, [1.0, 2.0, 3.0, 4.0]), GRAMS8, 0.1, 0.1)
    npt.assert_allclose(fit.phi.coefs, 0.0)
    assert fit.mean_response == pytest.approx(2.5)


def test_penalty_and_size_errors():
    data, _ = _synthetic(10)
    for a, b in [(0.0, 0.1), (0.1, 0.0), (-1.0, 0.1), (np.nan, 0.1), (0.1, np.inf)]:
        with pytest.raises(InvalidPenaltyError):
            fit_flrd(data, GRAMS8, a, b)
    with pytest.raises(InvalidPenaltyError):
        fit_flr_ridge(data, GRAMS8, 0.0)
    with pytest.raises(TooFewObservationsError):
        fit_flrd(data.subset([0]), GRAMS8, 0.1, 0.1)
    with pytest.raises(BasisMismatchError):
        fit_flrd(data, gram_matrices(build_basis((0, 1), k=9, degree=3)), 0.1, 0.1)


def test_centering_is_idempotent_for_fit():
    raw, _ = _synthetic(30, seed=16, sigma=0.1)
    centered, _, _ = center(raw)
    a = fit_flrd(raw, GRAMS8, 0.1, 0.1)
    b = fit_flrd(centered, GRAMS8, 0.1, 0.1)
    npt.assert_allclose(a.phi.coefs, b.phi.coefs, atol=1e-12)
    npt.assert_allclose(a.predict(raw), b.predict(raw), atol=1e-12)

