"""
Prediction error as the sample grows
====================================

Fix alpha, shrink beta like n^(-1/4) and watch the prediction error
against the noise-free responses.  A second sweep keeps beta equal to
alpha and shrinks both, which removes the penalty mismatch.
"""

import numpy as np

from flrd import SyntheticSpec, build_basis, fit_flrd, generate, gram_matrices, polynomial_decay, smooth_truth

grams = gram_matrices(build_basis((0.0, 1.0), k=12, degree=3))
lam = polynomial_decay(grams.k_W)
phi, psi = smooth_truth(grams, lam)


def mspe(n, alpha, beta, seeds=20):
    errs = []
    for seed in range(seeds):
        train, _ = generate(SyntheticSpec(n, lam, phi, psi, 0.1, 1000 + seed), grams)
        test, y_star = generate(SyntheticSpec(2000, lam, phi, psi, 0.1, 5000 + seed), grams)
        fit = fit_flrd(train, grams, alpha, beta)
        errs.append(np.mean((fit.predict(test) - y_star) ** 2))
    return float(np.mean(errs))


ns = np.array([250, 1000, 4000])

# %%
# Fixed alpha = 0.1, beta = 0.5 n^(-1/4).
fixed = [mspe(n, 0.1, 0.5 * n ** -0.25) for n in ns]
for n, m in zip(ns, fixed):
    print(f"n={n:5d} beta={0.5 * n ** -0.25:.3f} MSPE={m:.3g}")
print("log-log slope:", np.polyfit(np.log(ns), np.log(fixed), 1)[0])

# %%
# In a finite basis the curve determines its derivative, and the estimate
# carries a bias that vanishes only near beta = alpha.  The sweep above
# crosses that point at n = 1000, hence the dip.  Tying the penalties and
# letting them shrink gives a clean decrease.
tied = [mspe(n, 0.5 * n ** -0.5, 0.5 * n ** -0.5) for n in ns]
for n, m in zip(ns, tied):
    print(f"n={n:5d} alpha=beta={0.5 * n ** -0.5:.4f} MSPE={m:.3g}")
print("log-log slope:", np.polyfit(np.log(ns), np.log(tied), 1)[0])
