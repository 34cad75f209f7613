"""Clamped B-spline bases on a closed interval and their Gram matrices.

Every basis lives on a user domain ``[a, b]`` but is evaluated on the
rescaled variable ``s = (t - a) / (b - a)`` in ``[0, 1]``.  Derivatives and
inner products are taken with respect to ``s``, so

    <u, v>_L = int_0^1 u(s) v(s) ds
    <u, v>_W = <u, v>_L + <u', v'>_L

and Gram matrices do not depend on the physical units of the abscissae.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import lapack, solve_triangular

from .errors import (
    InvalidDimensionError,
    InvalidDomainError,
    OutOfDomainError,
    SingularGramError,
    UnsupportedDegreeError,
)

__all__ = [
    "BSplineBasis",
    "GramPair",
    "build_basis",
    "eval_basis",
    "derivative_map",
    "gram_matrices",
    "orthonormal_map",
]

# relative slack when deciding whether an abscissa lies inside the domain
_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class BSplineBasis:
    """Clamped B-spline basis.

    Parameters
    ----------
    domain : (float, float)
        Interval ``(a, b)`` in data units.
    degree : int
        Polynomial degree of each piece.
    knots : ndarray
        Knot vector on the unit interval with ``degree + 1`` fold ends.
    """

    domain: Tuple[float, float]
    degree: int
    knots: np.ndarray = field(repr=False)

    def __post_init__(self):
        a, b = (float(v) for v in self.domain)
        if not (np.isfinite(a) and np.isfinite(b)) or a >= b:
            raise InvalidDomainError(f"domain must satisfy a < b, got [{a}, {b}]")
        if int(self.degree) != self.degree or self.degree < 0:
            raise InvalidDimensionError(f"degree must be a nonnegative integer, got {self.degree}")
        knots = np.array(self.knots, dtype=float)
        p = int(self.degree)
        if knots.ndim != 1 or knots.size < 2 * (p + 1):
            raise InvalidDimensionError("knot vector too short for the requested degree")
        if np.any(np.diff(knots) < 0):
            raise InvalidDimensionError("knots must be nondecreasing")
        if not (np.all(knots[: p + 1] == 0.0) and np.all(knots[-(p + 1):] == 1.0)):
            raise InvalidDimensionError("knots must be clamped to 0 and 1 with multiplicity degree+1")
        knots.setflags(write=False)
        object.__setattr__(self, "domain", (a, b))
        object.__setattr__(self, "degree", p)
        object.__setattr__(self, "knots", knots)

    @property
    def k(self) -> int:
        """Number of basis functions."""
        return self.knots.size - self.degree - 1

    @property
    def key(self):
        return (self.domain, self.degree, tuple(self.knots.tolist()))

    def __eq__(self, other):
        if not isinstance(other, BSplineBasis):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def to_unit(self, t) -> np.ndarray:
        """Map abscissae from ``domain`` to ``[0, 1]``, rejecting points outside."""
        a, b = self.domain
        s = (np.asarray(t, dtype=float) - a) / (b - a)
        if np.any(~np.isfinite(s)) or np.any(s < -_DOMAIN_SLACK) or np.any(s > 1 + _DOMAIN_SLACK):
            raise OutOfDomainError(f"abscissae outside the basis domain [{a}, {b}]")
        return np.clip(s, 0.0, 1.0)

    def from_unit(self, s) -> np.ndarray:
        a, b = self.domain
        return a + (b - a) * np.asarray(s, dtype=float)

    def grid(self, m: int) -> np.ndarray:
        """``m`` equispaced abscissae covering the domain, in data units."""
        return self.from_unit(np.linspace(0.0, 1.0, m))


def build_basis(domain=(0.0, 1.0), k: int = 10, degree: int = 3) -> BSplineBasis:
    """Clamped basis with ``k`` functions and uniform interior knots.

    Raises
    ------
    InvalidDimensionError
        If ``k < degree + 1``.
    InvalidDomainError
        If the domain is empty or reversed.
    """
    a, b = (float(v) for v in domain)
    if not (np.isfinite(a) and np.isfinite(b)) or a >= b:
        raise InvalidDomainError(f"domain must satisfy a < b, got [{a}, {b}]")
    if int(degree) != degree or degree < 0:
        raise InvalidDimensionError(f"degree must be a nonnegative integer, got {degree}")
    if int(k) != k or k < degree + 1:
        raise InvalidDimensionError(f"k={k} is smaller than degree+1={degree + 1}")
    k, degree = int(k), int(degree)
    interior = np.linspace(0.0, 1.0, k - degree + 1)[1:-1]
    knots = np.concatenate([np.zeros(degree + 1), interior, np.ones(degree + 1)])
    return BSplineBasis((a, b), degree, knots)


def _spans(knots: np.ndarray, degree: int, s: np.ndarray) -> np.ndarray:
    # index i of the nonempty knot interval [t_i, t_{i+1}) holding s; s = 1 goes to the last one
    k = knots.size - degree - 1
    idx = np.searchsorted(knots, s, side="right") - 1
    return np.clip(idx, degree, k - 1)


def _nonzero_values(knots: np.ndarray, degree: int, s: np.ndarray, spans: np.ndarray) -> np.ndarray:
    """Cox-de Boor triangle: the ``degree + 1`` functions alive on each span.

    Column ``r`` of the result is basis function ``spans - degree + r``.
    """
    m = s.size
    values = np.zeros((m, degree + 1))
    values[:, 0] = 1.0
    left = np.zeros((m, degree + 1))
    right = np.zeros((m, degree + 1))
    for j in range(1, degree + 1):
        left[:, j] = s - knots[spans + 1 - j]
        right[:, j] = knots[spans + j] - s
        saved = np.zeros(m)
        for r in range(j):
            temp = values[:, r] / (right[:, r + 1] + left[:, j - r])
            values[:, r] = saved + right[:, r + 1] * temp
            saved = left[:, j - r] * temp
        values[:, j] = saved
    return values


def _scatter(values: np.ndarray, spans: np.ndarray, degree: int, ncols: int) -> np.ndarray:
    m = values.shape[0]
    out = np.zeros((m, ncols))
    cols = spans[:, None] - degree + np.arange(degree + 1)[None, :]
    np.put_along_axis(out, cols, values, axis=1)
    return out


def _unit_design(basis: BSplineBasis, s: np.ndarray, derivative: int = 0) -> np.ndarray:
    knots, p, k = basis.knots, basis.degree, basis.k
    spans = _spans(knots, p, s)
    if derivative == 0:
        return _scatter(_nonzero_values(knots, p, s, spans), spans, p, k)
    if derivative != 1:
        raise ValueError("only first derivatives are supported")
    if p == 0:
        return np.zeros((s.size, k))
    # degree p-1 functions on the same (full) knot vector: k + 1 of them
    lower = _scatter(_nonzero_values(knots, p - 1, s, spans), spans, p - 1, k + 1)
    with np.errstate(divide="ignore"):
        inv_left = np.where(knots[p:p + k] > knots[:k], p / (knots[p:p + k] - knots[:k]), 0.0)
        inv_right = np.where(
            knots[p + 1:p + 1 + k] > knots[1:k + 1],
            p / (knots[p + 1:p + 1 + k] - knots[1:k + 1]),
            0.0,
        )
    return lower[:, :k] * inv_left - lower[:, 1:] * inv_right


def eval_basis(basis: BSplineBasis, t, derivative: int = 0) -> np.ndarray:
    """Evaluate all basis functions at ``t``.

    Parameters
    ----------
    basis : BSplineBasis
    t : float or array_like
        Abscissae in data units.
    derivative : {0, 1}
        Order of the derivative, taken with respect to the rescaled variable.

    Returns
    -------
    ndarray
        Shape ``(k,)`` for scalar ``t``, otherwise ``(len(t), k)``.
    """
    scalar = np.ndim(t) == 0
    s = np.atleast_1d(basis.to_unit(t)).astype(float)
    out = _unit_design(basis, s, derivative)
    return out[0] if scalar else out


def derivative_map(basis: BSplineBasis) -> Tuple[Optional[BSplineBasis], np.ndarray]:
    """Derivative of a spline as a spline one degree lower.

    Returns ``(dbasis, D)`` such that ``spline'(s; c) = spline(s; D @ c)`` on
    ``dbasis``.  A degree-0 basis has no derivative space: the result is
    ``(None, zeros((0, k)))``.
    """
    p, k, knots = basis.degree, basis.k, basis.knots
    if p == 0:
        return None, np.zeros((0, k))
    dbasis = BSplineBasis(basis.domain, p - 1, knots[1:-1])
    D = np.zeros((k - 1, k))
    scale = p / (knots[p + 1:p + k] - knots[1:k])
    rows = np.arange(k - 1)
    D[rows, rows] = -scale
    D[rows, rows + 1] = scale
    return dbasis, D


def _quadrature(basis: BSplineBasis, order: int):
    """Gauss-Legendre nodes and weights on every nonempty knot span."""
    x, w = np.polynomial.legendre.leggauss(order)
    breaks = np.unique(basis.knots)
    lo, hi = breaks[:-1], breaks[1:]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo))[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def _gram(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    G = values.T @ (values * weights[:, None])
    return 0.5 * (G + G.T)


def _cholesky_upper(G: np.ndarray) -> np.ndarray:
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise InvalidDimensionError(f"expected a square matrix, got shape {G.shape}")
    if G.shape[0] == 0:
        return np.zeros((0, 0))
    R, info = lapack.dpotrf(G, lower=0, clean=1, overwrite_a=0)
    if info > 0:
        raise SingularGramError(
            f"Gram matrix is not positive definite: leading minor of order {info} fails",
            minor=int(info),
        )
    if info < 0:
        raise ValueError(f"dpotrf: illegal argument {-info}")
    return R


def orthonormal_map(G) -> np.ndarray:
    """Inverse of the upper Cholesky factor of ``G``.

    For ``G = R.T @ R`` the returned ``U = inv(R)`` satisfies
    ``U.T @ G @ U = I``, so a raw coefficient vector ``c`` has orthonormal
    coordinates ``R @ c`` and inner products become dot products.

    Raises
    ------
    SingularGramError
        If ``G`` is not positive definite; ``err.minor`` names the first
        failing leading minor.
    """
    R = _cholesky_upper(G)
    return solve_triangular(R, np.eye(R.shape[0]), lower=False)


@dataclass(frozen=True, eq=False)
class GramPair:
    """Gram matrices of a basis and the coordinate maps built on them.

    Attributes
    ----------
    basis, deriv_basis : BSplineBasis
        Curve basis and the basis of derivatives (``None`` for degree 0).
    G_L, G_D, G_W : ndarray
        ``int b_i b_j``, ``int b_i' b_j'`` and their sum.
    D_coef : ndarray
        Derivative map from ``basis`` to ``deriv_basis`` coefficients.
    G_L_deriv : ndarray
        L Gram of ``deriv_basis``.
    U_W, U_L : ndarray
        Orthonormalizing factors of ``G_W`` and ``G_L_deriv``; ``R_W`` and
        ``R_L`` are their inverses (upper Cholesky factors).
    """

    basis: BSplineBasis
    deriv_basis: Optional[BSplineBasis]
    G_L: np.ndarray
    G_D: np.ndarray
    G_W: np.ndarray
    D_coef: np.ndarray
    G_L_deriv: np.ndarray
    U_W: np.ndarray
    U_L: np.ndarray
    R_W: np.ndarray
    R_L: np.ndarray

    @property
    def k_W(self) -> int:
        return self.G_W.shape[0]

    @property
    def k_L(self) -> int:
        return self.G_L_deriv.shape[0]

    @property
    def D_orth(self) -> np.ndarray:
        """Derivative map in orthonormal coordinates, W -> L; its adjoint is the transpose."""
        return self.R_L @ self.D_coef @ self.U_W

    def w_coords(self, coefs) -> np.ndarray:
        """Orthonormal W coordinates of raw coefficient rows."""
        return np.asarray(coefs, dtype=float) @ self.R_W.T

    def l_coords(self, dcoefs) -> np.ndarray:
        """Orthonormal L coordinates of raw derivative-basis coefficient rows."""
        return np.asarray(dcoefs, dtype=float) @ self.R_L.T

    def w_raw(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.U_W.T

    def l_raw(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.U_L.T


def gram_matrices(basis: BSplineBasis) -> GramPair:
    """Exact Gram matrices by Gauss-Legendre quadrature of order ``degree + 2`` per span."""
    s, w = _quadrature(basis, basis.degree + 2)
    G_L = _gram(_unit_design(basis, s), w)
    G_D = _gram(_unit_design(basis, s, derivative=1), w)
    G_W = G_L + G_D
    dbasis, D = derivative_map(basis)
    if dbasis is None:
        G_L_deriv = np.zeros((0, 0))
    else:
        G_L_deriv = _gram(_unit_design(dbasis, s), w)
    R_W = _cholesky_upper(G_W)
    R_L = _cholesky_upper(G_L_deriv)
    eye_W, eye_L = np.eye(R_W.shape[0]), np.eye(R_L.shape[0])
    U_W = solve_triangular(R_W, eye_W, lower=False)
    U_L = solve_triangular(R_L, eye_L, lower=False) if R_L.size else np.zeros((0, 0))
    for arr in (G_L, G_D, G_W, D, G_L_deriv, U_W, U_L, R_W, R_L):
        arr.setflags(write=False)
    return GramPair(basis, dbasis, G_L, G_D, G_W, D, G_L_deriv, U_W, U_L, R_W, R_L)


def require_derivative(grams: GramPair) -> None:
    if grams.deriv_basis is None:
        raise UnsupportedDegreeError("degree-0 basis has no derivative in L")
