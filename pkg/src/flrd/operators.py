"""Empirical covariance operators and their regularized inverses.

All matrices are expressed in orthonormal coordinates (``GramPair.R_W`` for
curves, ``GramPair.R_L`` for derivatives), where the adjoint of an operator
is its transpose.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigh

from .basis import GramPair, require_derivative
from .curves import FunctionalDataset
from .errors import (
    BasisMismatchError,
    EmptyDataError,
    InvalidPenaltyError,
    MustCenterError,
    NotPSDError,
)

__all__ = [
    "CovarianceSet",
    "SchurSystem",
    "empirical_covariances",
    "reg_inverse_apply",
    "schur_systems",
    "operator_sqrt",
    "sup_norm",
    "symmetrize",
]

PSD_TOL = 1e-8


def symmetrize(T: np.ndarray) -> np.ndarray:
    return 0.5 * (T + T.T)


def _check_psd(T: np.ndarray, eigvals=None) -> None:
    if T.size == 0:
        return
    w = np.linalg.eigvalsh(T) if eigvals is None else eigvals
    tol = PSD_TOL * max(float(np.trace(T)), np.finfo(float).tiny)
    if w[0] < -tol:
        raise NotPSDError(f"matrix is not PSD: min eigenvalue {w[0]:.3e} < -{tol:.3e}")


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not np.isfinite(gamma) or gamma <= 0:
        raise InvalidPenaltyError(f"penalty must be > 0, got {gamma}")
    return gamma


def _shifted_solve(T: np.ndarray, gamma: float, V: np.ndarray) -> np.ndarray:
    """Solve ``(T + gamma I) W = V`` with one step of iterative refinement.

    Falls back to a clamped eigendecomposition when the Cholesky
    factorization breaks down.
    """
    A = T + gamma * np.eye(T.shape[0])
    try:
        factor = cho_factor(A, lower=False, check_finite=False)
    except LinAlgError:
        w, Q = eigh(T)
        w = np.maximum(w, 0.0)
        return Q @ ((Q.T @ V) / (w + gamma).reshape((-1,) + (1,) * (V.ndim - 1)))
    W = cho_solve(factor, V, check_finite=False)
    W = W + cho_solve(factor, V - A @ W, check_finite=False)
    return W


def reg_inverse_apply(T, gamma: float, v) -> np.ndarray:
    """Apply the Tikhonov resolvent ``(T + gamma I)^{-1}`` to ``v``.

    Parameters
    ----------
    T : (p, p) array_like
        Symmetric positive semidefinite operator.
    gamma : float
        Strictly positive shift.
    v : (p,) or (p, r) array_like

    Raises
    ------
    InvalidPenaltyError
        If ``gamma <= 0``.
    NotPSDError
        If ``T`` has an eigenvalue below ``-1e-8 * trace(T)``.
    """
    gamma = _check_gamma(gamma)
    T = symmetrize(np.asarray(T, dtype=float))
    _check_psd(T)
    return _shifted_solve(T, gamma, np.asarray(v, dtype=float))


@dataclass(frozen=True, eq=False)
class CovarianceSet:
    """Empirical moments of ``(X, X', y)`` in orthonormal coordinates.

    ``GammaPrime`` maps L to W (``1/n sum x_i x'_i^T``); ``GammaPrimeStar``
    is its adjoint.
    """

    n: int
    Gamma: np.ndarray
    GammaPrime: np.ndarray
    GammaPrimeStar: np.ndarray
    GammaPrimePrime: np.ndarray
    delta: np.ndarray
    deltaPrime: np.ndarray


def empirical_covariances(dataset: FunctionalDataset, grams: GramPair) -> CovarianceSet:
    """Empirical covariances and cross-covariances of a centered dataset."""
    if not dataset.centered:
        raise MustCenterError("empirical covariances need a centered dataset; call center() first")
    if dataset.n == 0:
        raise EmptyDataError("empty dataset")
    if dataset.basis != grams.basis:
        raise BasisMismatchError("dataset and Gram matrices use different bases")
    require_derivative(grams)
    n = dataset.n
    X = grams.w_coords(dataset.coefs)
    Xd = grams.l_coords(dataset.deriv_coefs)
    y = dataset.responses
    Gamma = symmetrize(X.T @ X / n)
    GammaPrime = X.T @ Xd / n
    GammaPrimePrime = symmetrize(Xd.T @ Xd / n)
    return CovarianceSet(
        n=n,
        Gamma=Gamma,
        GammaPrime=GammaPrime,
        GammaPrimeStar=GammaPrime.T.copy(),
        GammaPrimePrime=GammaPrimePrime,
        delta=X.T @ y / n,
        deltaPrime=Xd.T @ y / n,
    )


@dataclass(frozen=True, eq=False)
class SchurSystem:
    """Regularized Schur complements for the curve and derivative coefficients."""

    alpha: float
    S_phi: np.ndarray
    u_phi: np.ndarray
    S_psi: np.ndarray
    u_psi: np.ndarray


def schur_systems(cov: CovarianceSet, alpha: float) -> SchurSystem:
    """Eliminate one unknown from the moment equations, with penalty ``alpha``.

    ``S_phi = Gamma - GammaPrime (GammaPrimePrime + alpha I)^{-1} GammaPrimeStar``
    and ``u_phi = delta - GammaPrime (GammaPrimePrime + alpha I)^{-1} deltaPrime``;
    ``S_psi`` and ``u_psi`` swap the roles of the two spaces.
    """
    alpha = _check_gamma(alpha)
    # solve for both right-hand sides at once
    rhs_L = np.column_stack([cov.GammaPrimeStar, cov.deltaPrime])
    sol_L = _shifted_solve(cov.GammaPrimePrime, alpha, rhs_L)
    S_phi = symmetrize(cov.Gamma - cov.GammaPrime @ sol_L[:, :-1])
    u_phi = cov.delta - cov.GammaPrime @ sol_L[:, -1]

    rhs_W = np.column_stack([cov.GammaPrime, cov.delta])
    sol_W = _shifted_solve(cov.Gamma, alpha, rhs_W)
    S_psi = symmetrize(cov.GammaPrimePrime - cov.GammaPrimeStar @ sol_W[:, :-1])
    u_psi = cov.deltaPrime - cov.GammaPrimeStar @ sol_W[:, -1]
    return SchurSystem(alpha, S_phi, u_phi, S_psi, u_psi)


def operator_sqrt(T) -> np.ndarray:
    """Symmetric PSD square root via eigendecomposition, negative eigenvalues clamped."""
    T = symmetrize(np.asarray(T, dtype=float))
    w, Q = np.linalg.eigh(T)
    _check_psd(T, w)
    return symmetrize((Q * np.sqrt(np.maximum(w, 0.0))) @ Q.T)


def sup_norm(T) -> float:
    """Operator norm: the largest singular value."""
    T = np.asarray(T, dtype=float)
    if T.size == 0:
        return 0.0
    return float(np.linalg.norm(T, 2))
