"""Functional linear regression with derivatives.

Scalar responses are regressed on a curve and on its first derivative,

    y = <phi, X>_W + <psi, X'>_L + eps,

with curves represented on clamped B-spline bases.  The pair ``(phi, psi)``
is estimated from the empirical moment equations with two Tikhonov
penalties ``(alpha, beta)`` chosen by leave-one-out cross-validation.
"""

from .basis import (
    BSplineBasis,
    GramPair,
    build_basis,
    derivative_map,
    eval_basis,
    gram_matrices,
    orthonormal_map,
)
from .curves import (
    Curve,
    FunctionalDataset,
    SampledCurve,
    center,
    differentiate,
    grams_for,
    inner_L,
    inner_W,
    smooth,
)
from .estimator import (
    FLRDFit,
    RidgeFLRFit,
    fit_flr_ridge,
    fit_flrd,
    make_unidentifiable,
    msep,
    predict,
)
from .io import load_model, save_model
from .operators import (
    CovarianceSet,
    SchurSystem,
    empirical_covariances,
    operator_sqrt,
    reg_inverse_apply,
    schur_systems,
    sup_norm,
)
from .selection import CVResult, cv_score, grid_search
from .simulate import SyntheticSpec, generate, polynomial_decay, smooth_truth

__version__ = "0.1.0"
