"""
Choosing the penalties by leave-one-out
=======================================

Every cell of an (alpha, beta) grid is scored by leave-one-out prediction
error; each fold re-centers its own training curves.  Cells run on a
thread pool and give the same scores as a serial run.
"""

import numpy as np

from flrd import SyntheticSpec, build_basis, generate, gram_matrices, grid_search, polynomial_decay, smooth_truth

grams = gram_matrices(build_basis((0.0, 1.0), k=10, degree=3))
lam = polynomial_decay(grams.k_W)
phi, psi = smooth_truth(grams, lam)
data, _ = generate(SyntheticSpec(80, lam, phi, psi, sigma_eps=0.3, seed=3), grams)

grid = np.logspace(-4, 0, 5)
result = grid_search(data, grams, grid, grid, n_jobs=4)

# %%
# The surface, alpha down the rows and beta across the columns.
print("alpha \\ beta " + " ".join(f"{b:9.0e}" for b in grid))
for a, row in zip(grid, result.scores):
    print(f"{a:12.0e} " + " ".join(f"{v:9.4f}" for v in row))
print(f"chosen alpha={result.best_alpha:g}, beta={result.best_beta:g}, CV MSEP={result.best_score:.4f}")

# %%
# The valley tends to run along the diagonal: with beta equal to alpha the
# estimator is exactly ridge regression on the curve and its derivative
# jointly, and moving beta away from alpha adds shrinkage bias.
