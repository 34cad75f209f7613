"""Doubly penalized FLRD estimator, the ridge FLR baseline and prediction error."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.linalg import solve_triangular

from .basis import BSplineBasis, GramPair, orthonormal_map, require_derivative
from .curves import Curve, FunctionalDataset, center, grams_for
from .errors import (
    BasisMismatchError,
    DegenerateDesignWarning,
    EmptyDataError,
    InvalidPenaltyError,
    TooFewObservationsError,
)
from .operators import _shifted_solve, empirical_covariances, schur_systems, symmetrize

__all__ = [
    "FLRDFit",
    "RidgeFLRFit",
    "fit_flrd",
    "fit_flr_ridge",
    "predict",
    "msep",
    "make_unidentifiable",
    "pair_contribution",
]


def _check_penalty(name: str, value: float) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise InvalidPenaltyError(f"{name} must be > 0, got {value}")
    return value


def _as_coef_rows(x, basis: BSplineBasis) -> np.ndarray:
    if isinstance(x, Curve):
        if x.basis != basis:
            raise BasisMismatchError("curve basis differs from the fitted model's basis")
        return x.coefs[None, :]
    if isinstance(x, FunctionalDataset):
        if x.basis != basis:
            raise BasisMismatchError("dataset basis differs from the fitted model's basis")
        return x.coefs + x.mean_coefs
    X = np.atleast_2d(np.asarray(x, dtype=float))
    if X.shape[1] != basis.k:
        raise BasisMismatchError(f"expected {basis.k} coefficients per curve, got {X.shape[1]}")
    return X


def _centered_training(dataset: FunctionalDataset) -> FunctionalDataset:
    if dataset.n < 2:
        raise TooFewObservationsError(f"need at least 2 observations, got {dataset.n}")
    centered = dataset if dataset.centered else center(dataset)[0]
    if not np.any(centered.coefs):
        warnings.warn(
            "all curves coincide after centering; the fit is driven by the penalties alone",
            DegenerateDesignWarning,
            stacklevel=3,
        )
    return centered


@dataclass(frozen=True, eq=False)
class FLRDFit:
    """Fitted pair ``(phi_hat, psi_hat)`` with the training means.

    Predictions for a raw curve ``x`` are
    ``mean_response + <phi, x - mean>_W + <psi, (x - mean)'>_L``.
    """

    phi: Curve
    psi: Curve
    alpha: float
    beta: float
    mean_curve: Curve
    mean_response: float

    @property
    def basis(self) -> BSplineBasis:
        return self.phi.basis

    def predict(self, x) -> Union[float, np.ndarray]:
        """Predict for a Curve (returns a float), a dataset or rows of coefficients."""
        rows = _as_coef_rows(x, self.basis)
        grams = grams_for(self.basis)
        dx = rows - self.mean_curve.coefs
        out = self.mean_response + dx @ (grams.G_W @ self.phi.coefs)
        out = out + (dx @ grams.D_coef.T) @ (grams.G_L_deriv @ self.psi.coefs)
        return float(out[0]) if isinstance(x, Curve) else out


@dataclass(frozen=True, eq=False)
class RidgeFLRFit:
    """Ridge functional linear regression ``y = mean + <theta, x - mean>_L``."""

    theta: Curve
    beta: float
    mean_curve: Curve
    mean_response: float

    @property
    def basis(self) -> BSplineBasis:
        return self.theta.basis

    def predict(self, x) -> Union[float, np.ndarray]:
        rows = _as_coef_rows(x, self.basis)
        G_L = grams_for(self.basis).G_L
        out = self.mean_response + (rows - self.mean_curve.coefs) @ (G_L @ self.theta.coefs)
        return float(out[0]) if isinstance(x, Curve) else out


def fit_flrd(dataset: FunctionalDataset, grams: GramPair, alpha: float, beta: float) -> FLRDFit:
    """Fit ``y = <phi, X>_W + <psi, X'>_L + eps`` by double penalization.

    ``alpha`` regularizes the covariance inverses inside the Schur
    complements; ``beta`` regularizes the outer solves
    ``phi = (S_phi + beta I)^{-1} u_phi`` and ``psi = (S_psi + beta I)^{-1} u_psi``.
    An uncentered dataset is centered first and its means are kept for
    prediction.

    Warns
    -----
    DegenerateDesignWarning
        If every centered curve is zero.
    """
    alpha = _check_penalty("alpha", alpha)
    beta = _check_penalty("beta", beta)
    if dataset.basis != grams.basis:
        raise BasisMismatchError("dataset and Gram matrices use different bases")
    require_derivative(grams)
    data = _centered_training(dataset)
    schur = schur_systems(empirical_covariances(data, grams), alpha)
    phi = _shifted_solve(schur.S_phi, beta, schur.u_phi)
    psi = _shifted_solve(schur.S_psi, beta, schur.u_psi)
    return FLRDFit(
        phi=Curve(grams.basis, grams.U_W @ phi),
        psi=Curve(grams.deriv_basis, grams.U_L @ psi),
        alpha=alpha,
        beta=beta,
        mean_curve=data.mean_curve,
        mean_response=data.mean_response,
    )


def fit_flr_ridge(dataset: FunctionalDataset, grams: GramPair, beta: float) -> RidgeFLRFit:
    """Ridge FLR baseline: ``theta = (Gamma_L + beta I)^{-1} delta_L`` in L coordinates."""
    beta = _check_penalty("beta", beta)
    if dataset.basis != grams.basis:
        raise BasisMismatchError("dataset and Gram matrices use different bases")
    data = _centered_training(dataset)
    U = orthonormal_map(grams.G_L)
    X = solve_triangular(U, data.coefs.T, lower=False).T
    n = data.n
    theta = _shifted_solve(symmetrize(X.T @ X / n), beta, X.T @ data.responses / n)
    return RidgeFLRFit(
        theta=Curve(grams.basis, U @ theta),
        beta=beta,
        mean_curve=data.mean_curve,
        mean_response=data.mean_response,
    )


def predict(fit, x):
    """Prediction for a curve (float) or for every curve of a dataset (array)."""
    return fit.predict(x)


def msep(fit, validation: FunctionalDataset) -> float:
    """Mean squared error of predictions on a validation dataset."""
    if validation.n == 0:
        raise EmptyDataError("empty validation set")
    y = validation.responses + validation.mean_response
    resid = y - fit.predict(validation)
    return float(np.mean(resid**2))


def _parent_basis(dbasis: BSplineBasis) -> BSplineBasis:
    knots = np.concatenate([[0.0], dbasis.knots, [1.0]])
    return BSplineBasis(dbasis.domain, dbasis.degree + 1, knots)


def make_unidentifiable(psi: Curve, grams: Optional[GramPair] = None) -> Curve:
    """Curve ``phi = -D* psi``, so that ``(phi, psi)`` predicts zero for every input.

    ``D*`` is the adjoint of differentiation from W to L.  ``grams`` are
    those of the curve basis; by default they are rebuilt from the
    derivative basis ``psi`` lives on.
    """
    if grams is None:
        grams = grams_for(_parent_basis(psi.basis))
    require_derivative(grams)
    if psi.basis != grams.deriv_basis:
        raise BasisMismatchError("psi must live on the derivative basis of the curve space")
    psi_orth = grams.R_L @ psi.coefs
    return Curve(grams.basis, -(grams.U_W @ (grams.D_orth.T @ psi_orth)))


def pair_contribution(phi: Curve, psi: Curve, x: Curve) -> float:
    """``<phi, x>_W + <psi, x'>_L``."""
    if phi.basis != x.basis:
        raise BasisMismatchError("phi and x live on different bases")
    grams = grams_for(x.basis)
    require_derivative(grams)
    if psi.basis != grams.deriv_basis:
        raise BasisMismatchError("psi must live on the derivative basis of x")
    dx = grams.D_coef @ x.coefs
    return float(phi.coefs @ grams.G_W @ x.coefs + psi.coefs @ grams.G_L_deriv @ dx)
