"""
Splines, derivatives and the two inner products
===============================================

Curves are stored as coefficient vectors on a clamped cubic B-spline basis.
This script builds a basis, checks the partition of unity, differentiates a
curve exactly and compares the L2 and Sobolev norms.
"""

import numpy as np

from flrd import Curve, build_basis, differentiate, eval_basis, gram_matrices, inner_L, inner_W

# A 12-function cubic basis over a wavelength range in nanometres.
basis = build_basis((1100.0, 2400.0), k=12, degree=3)
t = np.linspace(1100.0, 2400.0, 7)
B = eval_basis(basis, t)
print("basis values at 7 wavelengths, row sums:", np.round(B.sum(axis=1), 15))

# %%
# Least-squares smoothing of a sampled curve, then its exact derivative.
# Derivatives live on the degree-2 basis of the same knots and are taken in
# the rescaled variable s = (t - 1100) / 1300.
s = (t - 1100.0) / 1300.0
x = Curve(basis, np.linspace(0.0, 1.0, 12) ** 2)
dx = differentiate(x)
print("x(t)  =", np.round(x(t), 4))
print("x'(t) =", np.round(dx(t), 4))

# %%
# The Sobolev norm adds the energy of the derivative to the L2 norm.
print("||x||_L^2 =", inner_L(x, x))
print("||x||_W^2 =", inner_W(x, x))

# %%
# The Gram matrices behind those numbers, and the orthonormal coordinates
# used everywhere in the estimator: R_W c has identity Gram matrix.
grams = gram_matrices(basis)
print("condition number of G_W:", np.linalg.cond(grams.G_W))
c = grams.R_W @ x.coefs
print("same norm from orthonormal coordinates:", c @ c)
