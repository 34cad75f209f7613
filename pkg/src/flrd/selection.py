"""Leave-one-out selection of the two FLRD penalties."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .basis import GramPair
from .curves import FunctionalDataset
from .errors import InvalidPenaltyError, TooFewObservationsError
from .estimator import fit_flrd

__all__ = ["CVResult", "cv_score", "grid_search", "default_grid"]


def default_grid(m: int = 8, low: float = 1e-4, high: float = 1.0) -> np.ndarray:
    return np.logspace(np.log10(low), np.log10(high), m)


def _canonical(dataset: FunctionalDataset) -> FunctionalDataset:
    # fixed observation order, so scores do not depend on how rows were shuffled
    coefs = dataset.coefs + dataset.mean_coefs
    y = dataset.responses + dataset.mean_response
    keys = np.column_stack([coefs, y]).T[::-1]
    order = np.lexsort(keys)
    return FunctionalDataset(dataset.basis, coefs[order], y[order])


def _loo(data: FunctionalDataset, grams: GramPair, alpha: float, beta: float) -> float:
    n = data.n
    everyone = np.arange(n)
    sq = []
    for i in range(n):
        fit = fit_flrd(data.subset(everyone != i), grams, alpha, beta)
        resid = data.responses[i] - float(fit.predict(data.coefs[i])[0])
        sq.append(resid * resid)
    return math.fsum(sq) / n


def cv_score(dataset: FunctionalDataset, grams: GramPair, alpha: float, beta: float) -> float:
    """Leave-one-out mean squared prediction error.

    Each fold refits (and re-centers) on the other ``n - 1`` observations and
    predicts the held-out response.
    """
    if dataset.n < 3:
        raise TooFewObservationsError(f"leave-one-out needs n >= 3, got {dataset.n}")
    return _loo(_canonical(dataset), grams, alpha, beta)


@dataclass(frozen=True, eq=False)
class CVResult:
    alpha_grid: np.ndarray
    beta_grid: np.ndarray
    scores: np.ndarray
    best_alpha: float
    best_beta: float
    best_score: float

    def rows(self):
        """``(alpha, beta, score)`` for every cell, alpha-major."""
        for i, a in enumerate(self.alpha_grid):
            for j, b in enumerate(self.beta_grid):
                yield float(a), float(b), float(self.scores[i, j])


def _check_grid(name: str, grid) -> np.ndarray:
    g = np.atleast_1d(np.asarray(grid, dtype=float))
    if g.ndim != 1 or g.size == 0:
        raise InvalidPenaltyError(f"{name} must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(g)) or np.any(g <= 0):
        raise InvalidPenaltyError(f"{name} values must be finite and > 0")
    return g


def grid_search(
    dataset: FunctionalDataset,
    grams: GramPair,
    alpha_grid: Sequence[float],
    beta_grid: Sequence[float],
    n_jobs: Optional[int] = None,
) -> CVResult:
    """Evaluate :func:`cv_score` on every ``(alpha, beta)`` cell.

    Cells are independent; ``n_jobs > 1`` evaluates them on a thread pool
    and gives the same scores as a serial run.  Ties go to the
    lexicographically smallest ``(alpha, beta)``.
    """
    alphas = _check_grid("alpha_grid", alpha_grid)
    betas = _check_grid("beta_grid", beta_grid)
    if dataset.n < 3:
        raise TooFewObservationsError(f"leave-one-out needs n >= 3, got {dataset.n}")
    data = _canonical(dataset)
    cells = [(a, b) for a in alphas for b in betas]

    def score(cell):
        return _loo(data, grams, cell[0], cell[1])

    if n_jobs is not None and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            values = list(pool.map(score, cells))
    else:
        values = [score(c) for c in cells]
    scores = np.array(values).reshape(alphas.size, betas.size)

    best = min(range(len(cells)), key=lambda idx: (values[idx], cells[idx]))
    return CVResult(
        alpha_grid=alphas,
        beta_grid=betas,
        scores=scores,
        best_alpha=float(cells[best][0]),
        best_beta=float(cells[best][1]),
        best_score=float(values[best]),
    )
