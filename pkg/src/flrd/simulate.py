"""Synthetic datasets drawn from the FLRD model.

Curves follow a finite Karhunen-Loeve expansion

    X_i = sum_p sqrt(lambda_p) * xi_ip * u_p

along the orthonormal W directions ``u_p`` (columns of ``GramPair.U_W``),
with bounded scores ``xi ~ U[-sqrt(3), sqrt(3)]`` (unit variance), so
``||X||_W <= sqrt(3) * sum_p sqrt(lambda_p)`` almost surely.  Responses are
``y_i = <phi, X_i>_W + <psi, X_i'>_L + eps_i`` with Gaussian ``eps``.

Random numbers come from numpy's PCG64 bit generator seeded with
``spec.seed``.  Draw order is fixed: the ``(n, len(eigenvalues))`` score
matrix row by row, then ``n`` standard normals for the noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .basis import GramPair, require_derivative
from .curves import Curve, FunctionalDataset
from .errors import BasisMismatchError, InvalidDimensionError

__all__ = ["SyntheticSpec", "generate", "polynomial_decay", "smooth_truth"]

SQRT3 = np.sqrt(3.0)


def polynomial_decay(m: int, exponent: float = 2.0) -> np.ndarray:
    """``lambda_p = p ** -exponent`` for ``p = 1..m``."""
    return np.arange(1, m + 1, dtype=float) ** -float(exponent)


def smooth_truth(grams: GramPair, eigenvalues, phi_scale: float = 1.0, psi_scale: float = 0.5):
    """A smooth true pair for the given spectrum.

    ``phi`` has coordinate ``phi_scale * lambda_p`` along ``u_p`` and
    ``psi = psi_scale * D(sum_p lambda_p u_p)``; both lie in the range of the
    corresponding covariance square roots, so ``sum <phi, u_p>^2 / lambda_p``
    stays bounded.

    Returns
    -------
    (Curve, Curve)
        ``phi`` on the curve basis and ``psi`` on the derivative basis.
    """
    require_derivative(grams)
    lam = np.asarray(eigenvalues, dtype=float)
    coord = np.zeros(grams.k_W)
    coord[: lam.size] = lam
    phi = Curve(grams.basis, grams.w_raw(phi_scale * coord))
    psi = Curve(grams.deriv_basis, grams.l_raw(psi_scale * (grams.D_orth @ coord)))
    return phi, psi


@dataclass(frozen=True, eq=False)
class SyntheticSpec:
    n: int
    eigenvalues: np.ndarray
    true_phi: Curve
    true_psi: Curve
    sigma_eps: float = 0.0
    seed: int = 0

    def __post_init__(self):
        lam = np.array(self.eigenvalues, dtype=float)
        if lam.ndim != 1 or lam.size == 0:
            raise InvalidDimensionError("eigenvalues must be a nonempty 1-d sequence")
        if np.any(lam <= 0) or np.any(np.diff(lam) > 0):
            raise ValueError("eigenvalues must be strictly positive and non-increasing")
        if int(self.n) != self.n or self.n < 1:
            raise InvalidDimensionError(f"n must be a positive integer, got {self.n}")
        if self.sigma_eps < 0:
            raise ValueError("sigma_eps must be >= 0")
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "sigma_eps", float(self.sigma_eps))
        object.__setattr__(self, "seed", int(self.seed))


def generate(spec: SyntheticSpec, grams: GramPair) -> Tuple[FunctionalDataset, np.ndarray]:
    """Draw a dataset from ``spec``.

    Returns
    -------
    dataset : FunctionalDataset
        Uncentered raw curves and noisy responses.
    y_star : ndarray
        Noise-free responses ``<phi, X_i>_W + <psi, X_i'>_L``.
    """
    require_derivative(grams)
    lam = spec.eigenvalues
    if lam.size > grams.k_W:
        raise InvalidDimensionError(
            f"{lam.size} eigenvalues exceed the basis dimension {grams.k_W}"
        )
    if spec.true_phi.basis != grams.basis or spec.true_psi.basis != grams.deriv_basis:
        raise BasisMismatchError("true (phi, psi) do not match the Gram matrices' bases")
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    scores = rng.uniform(-SQRT3, SQRT3, size=(spec.n, lam.size))
    noise = rng.standard_normal(spec.n) * spec.sigma_eps

    X = np.zeros((spec.n, grams.k_W))
    X[:, : lam.size] = scores * np.sqrt(lam)
    phi_orth = grams.R_W @ spec.true_phi.coefs
    psi_orth = grams.R_L @ spec.true_psi.coefs
    y_star = X @ phi_orth + (X @ grams.D_orth.T) @ psi_orth
    dataset = FunctionalDataset(grams.basis, grams.w_raw(X), y_star + noise)
    return dataset, y_star
