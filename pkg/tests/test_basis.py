import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flrd.basis import (
    build_basis,
    derivative_map,
    eval_basis,
    gram_matrices,
    orthonormal_map,
)
from flrd.errors import (
    InvalidDimensionError,
    InvalidDomainError,
    OutOfDomainError,
    SingularGramError,
)

from oracles import cox_de_boor_row, gram_by_quadrature, spline


def test_constant_basis():
    b = build_basis((0, 1), k=1, degree=0)
    assert b.k == 1
    for t in (0.0, 0.3, 1.0):
        npt.assert_array_equal(eval_basis(b, t), [1.0])


def test_bernstein_cubic_midpoint():
    b = build_basis((0, 1), k=4, degree=3)
    npt.assert_array_equal(b.knots, [0, 0, 0, 0, 1, 1, 1, 1])
    expected = cox_de_boor_row(b, 0.5)
    npt.assert_allclose(expected, [0.125, 0.375, 0.375, 0.125], atol=1e-15)
    npt.assert_allclose(eval_basis(b, 0.5), expected, atol=1e-15)
    npt.assert_array_equal(eval_basis(b, 0.0), [1, 0, 0, 0])
    npt.assert_array_equal(eval_basis(b, 1.0), [0, 0, 0, 1])


def test_nir_spectral_basis():
    b = build_basis((1100, 2400), k=100, degree=3)
    assert b.k == 100
    assert b.knots.size == 104
    assert np.all(b.knots[:4] == 0) and np.all(b.knots[-4:] == 1)
    npt.assert_allclose(eval_basis(b, np.linspace(1100, 2400, 257)).sum(axis=1), 1.0, atol=1e-12)


@pytest.mark.parametrize("t", [0.37, 0.0, 1.0, 0.5, 0.123456])
def test_cubic_matches_recursion(t):
    b = build_basis((0, 1), k=10, degree=3)
    npt.assert_allclose(eval_basis(b, t), cox_de_boor_row(b, t), atol=1e-12)


@pytest.mark.parametrize("k,degree", [(1, 0), (5, 0), (6, 1), (7, 2), (10, 3), (12, 5)])
def test_invariants(k, degree):
    b = build_basis((-2.0, 3.0), k=k, degree=degree)
    assert b.k == b.knots.size - degree - 1 == k
    assert np.all(np.diff(b.knots) >= 0)
    V = eval_basis(b, np.linspace(-2, 3, 1000))
    assert np.all(V >= 0)
    assert np.all((V > 0).sum(axis=1) <= degree + 1)
    npt.assert_allclose(V.sum(axis=1), 1.0, atol=1e-12)


def test_derivative_of_partition_of_unity():
    b = build_basis((0, 1), k=15, degree=3)
    s = np.linspace(0.001, 0.999, 500)
    assert np.max(np.abs(eval_basis(b, s, derivative=1).sum(axis=1))) <= 1e-8


def test_build_errors():
    with pytest.raises(InvalidDimensionError):
        build_basis((0, 1), k=3, degree=3)
    with pytest.raises(InvalidDomainError):
        build_basis((1, 1), k=5, degree=3)
    with pytest.raises(InvalidDomainError):
        build_basis((2, 1), k=5, degree=3)


def test_out_of_domain():
    b = build_basis((1100, 2400), k=10, degree=3)
    with pytest.raises(OutOfDomainError):
        eval_basis(b, 1099.0)
    with pytest.raises(OutOfDomainError):
        eval_basis(b, [1200.0, 2400.5])


def test_derivative_map_examples():
    b = build_basis((0, 1), k=4, degree=3)
    db, D = derivative_map(b)
    assert db.degree == 2 and db.k == 3
    npt.assert_allclose(D @ np.ones(4), 0.0, atol=1e-15)
    npt.assert_allclose(D @ np.array([0, 1 / 3, 2 / 3, 1]), np.ones(3), atol=1e-14)


def test_derivative_map_finite_differences():
    rng = np.random.default_rng(7)
    b = build_basis((0, 1), k=12, degree=3)
    db, D = derivative_map(b)
    c = rng.standard_normal(b.k)
    h = 1e-6
    interior = np.setdiff1d(np.unique(b.knots), [0, 1])
    s = np.linspace(0.01, 0.99, 100)
    s = s[np.min(np.abs(s[:, None] - interior[None, :]), axis=1) > 1e-4]
    fd = (eval_basis(b, s + h) @ c - eval_basis(b, s - h) @ c) / (2 * h)
    exact = eval_basis(db, s) @ (D @ c)
    npt.assert_allclose(exact, fd, atol=1e-8)
    # scipy as a second opinion at machine precision
    npt.assert_allclose(exact, spline(b, c).derivative()(s), atol=1e-10)


def test_derivative_map_degree_zero():
    db, D = derivative_map(build_basis((0, 1), k=3, degree=0))
    assert db is None
    assert D.shape == (0, 3)


def test_gram_constant_basis():
    g = gram_matrices(build_basis((0, 1), k=1, degree=0))
    npt.assert_allclose(g.G_L, [[1.0]])
    npt.assert_allclose(g.G_D, [[0.0]])
    npt.assert_allclose(g.G_W, [[1.0]])


def test_gram_identity_function():
    g = gram_matrices(build_basis((0, 1), k=4, degree=3))
    c = np.array([0, 1 / 3, 2 / 3, 1])
    assert c @ g.G_L @ c == pytest.approx(1 / 3, abs=1e-14)
    assert c @ g.G_W @ c == pytest.approx(4 / 3, abs=1e-14)


@pytest.mark.parametrize("k,degree", [(10, 3), (6, 1), (7, 2)])
def test_gram_matches_adaptive_quadrature(k, degree):
    b = build_basis((0, 1), k=k, degree=degree)
    g = gram_matrices(b)
    GL, GD = gram_by_quadrature(b)
    npt.assert_allclose(g.G_L, GL, atol=1e-10)
    npt.assert_allclose(g.G_D, GD, atol=1e-10)
    npt.assert_allclose(g.G_W, GL + GD, atol=1e-10)


def test_gram_pair_invariants():
    g = gram_matrices(build_basis((0, 1), k=14, degree=3))
    for G in (g.G_L, g.G_D, g.G_W):
        npt.assert_allclose(G, G.T, rtol=1e-12, atol=0)
    assert np.linalg.eigvalsh(g.G_L).min() > 0
    assert np.linalg.eigvalsh(g.G_W).min() > 0
    assert np.linalg.eigvalsh(g.G_W - g.G_L).min() > -1e-12
    npt.assert_allclose(g.U_W.T @ g.G_W @ g.U_W, np.eye(14), atol=1e-10)
    npt.assert_allclose(g.U_L.T @ g.G_L_deriv @ g.U_L, np.eye(13), atol=1e-10)
    npt.assert_allclose(g.G_W, g.G_L + g.D_coef.T @ g.G_L_deriv @ g.D_coef, atol=1e-10)


def test_domain_rescaling_leaves_grams_unchanged():
    unit = gram_matrices(build_basis((0, 1), k=20, degree=3))
    nm = gram_matrices(build_basis((1100, 2400), k=20, degree=3))
    npt.assert_allclose(nm.G_L, unit.G_L, atol=1e-10)
    npt.assert_allclose(nm.G_W, unit.G_W, atol=1e-10)
    # same function evaluated in both parametrizations
    c = np.random.default_rng(0).standard_normal(20)
    t = np.linspace(1100, 2400, 11)
    npt.assert_allclose(
        eval_basis(nm.basis, t) @ c, eval_basis(unit.basis, (t - 1100) / 1300) @ c, atol=1e-12
    )


def test_orthonormal_map_examples():
    npt.assert_allclose(orthonormal_map(np.eye(3)), np.eye(3))
    npt.assert_allclose(orthonormal_map(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]), atol=1e-15)


def test_orthonormal_map_random_spd():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((8, 8))
    G = A @ A.T + 0.1 * np.eye(8)
    U = orthonormal_map(G)
    npt.assert_allclose(U.T @ G @ U, np.eye(8), atol=1e-10)
    npt.assert_allclose(np.tril(U, -1), 0.0)


def test_orthonormal_map_names_failing_minor():
    G = np.diag([1.0, 2.0, -1.0, 4.0])
    with pytest.raises(SingularGramError) as err:
        orthonormal_map(G)
    assert err.value.minor == 3
    assert "order 3" in str(err.value)


@settings(max_examples=40, deadline=None)
@given(
    k=st.integers(min_value=2, max_value=20),
    degree=st.integers(min_value=1, max_value=4),
    t=st.floats(min_value=0.0, max_value=1.0),
)
def test_partition_of_unity_property(k, degree, t):
    if k < degree + 1:
        k = degree + 1
    b = build_basis((0, 1), k=k, degree=degree)
    v = eval_basis(b, t)
    assert abs(v.sum() - 1.0) <= 1e-12
    npt.assert_allclose(v, cox_de_boor_row(b, t), atol=1e-12)
