"""Curves in coefficient space and datasets of (curve, response) pairs."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence

import numpy as np

from .basis import BSplineBasis, GramPair, derivative_map, eval_basis, gram_matrices
from .errors import (
    BasisMismatchError,
    DimensionMismatchError,
    EmptyDataError,
    InvalidDimensionError,
    RankError,
    UnderdeterminedError,
    UnsupportedDegreeError,
)

__all__ = [
    "SampledCurve",
    "Curve",
    "FunctionalDataset",
    "grams_for",
    "smooth",
    "smooth_many",
    "differentiate",
    "inner_L",
    "inner_W",
    "center",
]


@lru_cache(maxsize=32)
def grams_for(basis: BSplineBasis) -> GramPair:
    """Cached :func:`~flrd.basis.gram_matrices`."""
    return gram_matrices(basis)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SampledCurve:
    """A curve observed at strictly increasing abscissae."""

    abscissae: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = _frozen(self.abscissae)
        y = _frozen(self.values)
        if x.ndim != 1 or y.ndim != 1 or x.size != y.size:
            raise DimensionMismatchError(
                f"abscissae and values must be 1-d of equal length, got {x.shape} and {y.shape}"
            )
        if x.size < 2:
            raise InvalidDimensionError("a sampled curve needs at least 2 points")
        if np.any(np.diff(x) <= 0):
            raise InvalidDimensionError("abscissae must be strictly increasing")
        object.__setattr__(self, "abscissae", x)
        object.__setattr__(self, "values", y)


@dataclass(frozen=True, eq=False)
class Curve:
    """Spline ``sum_i coefs[i] * b_i`` on ``basis``."""

    basis: BSplineBasis
    coefs: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coefs)
        if c.shape != (self.basis.k,):
            raise DimensionMismatchError(
                f"expected {self.basis.k} coefficients, got shape {c.shape}"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("curve coefficients must be finite")
        object.__setattr__(self, "coefs", c)

    def __call__(self, t, derivative: int = 0):
        return eval_basis(self.basis, t, derivative) @ self.coefs

    def __add__(self, other: "Curve") -> "Curve":
        _same_basis(self, other)
        return Curve(self.basis, self.coefs + other.coefs)

    def __sub__(self, other: "Curve") -> "Curve":
        _same_basis(self, other)
        return Curve(self.basis, self.coefs - other.coefs)

    def __neg__(self) -> "Curve":
        return Curve(self.basis, -self.coefs)

    def __mul__(self, scalar: float) -> "Curve":
        return Curve(self.basis, float(scalar) * self.coefs)

    __rmul__ = __mul__

    @classmethod
    def zero(cls, basis: BSplineBasis) -> "Curve":
        return cls(basis, np.zeros(basis.k))


def _same_basis(u: Curve, v: Curve) -> None:
    if u.basis != v.basis:
        raise BasisMismatchError("curves live on different bases")


def smooth_many(abscissae, values, basis: BSplineBasis) -> np.ndarray:
    """Least-squares coefficients for every row of ``values``.

    Parameters
    ----------
    abscissae : array_like, shape (m,)
    values : array_like, shape (n, m) or (m,)
    basis : BSplineBasis

    Returns
    -------
    ndarray, shape (n, k) (or (k,) for a single row)
    """
    x = np.asarray(abscissae, dtype=float)
    Y = np.asarray(values, dtype=float)
    if Y.shape[-1] != x.size:
        raise DimensionMismatchError(f"{Y.shape[-1]} values for {x.size} abscissae")
    if x.size < basis.k:
        raise UnderdeterminedError(
            f"{x.size} sample points cannot determine {basis.k} coefficients"
        )
    B = eval_basis(basis, x)
    rank = int(np.linalg.matrix_rank(B))
    if rank < basis.k:
        raise RankError(f"design matrix has rank {rank} < k={basis.k}", rank=rank)
    coefs, *_ = np.linalg.lstsq(B, Y.T, rcond=None)
    return coefs.T


def smooth(raw: SampledCurve, basis: BSplineBasis) -> Curve:
    """Unpenalized least-squares projection of sampled values onto ``basis``."""
    return Curve(basis, smooth_many(raw.abscissae, raw.values, basis))


def differentiate(curve: Curve) -> Curve:
    """Exact derivative on the basis one degree lower."""
    dbasis, D = derivative_map(curve.basis)
    if dbasis is None:
        raise UnsupportedDegreeError("cannot differentiate a degree-0 curve")
    return Curve(dbasis, D @ curve.coefs)


def inner_L(u: Curve, v: Curve) -> float:
    _same_basis(u, v)
    return float(u.coefs @ grams_for(u.basis).G_L @ v.coefs)


def inner_W(u: Curve, v: Curve) -> float:
    _same_basis(u, v)
    if u.basis.degree == 0:
        raise UnsupportedDegreeError("W inner product needs a basis of degree >= 1")
    return float(u.coefs @ grams_for(u.basis).G_W @ v.coefs)


@dataclass(frozen=True, eq=False)
class FunctionalDataset:
    """Curves ``X_i`` (as coefficient rows), their derivatives and responses ``y_i``.

    ``mean_coefs`` and ``mean_response`` hold what was subtracted by
    :func:`center`; they are zero for a dataset that was never centered.
    """

    basis: BSplineBasis
    coefs: np.ndarray
    responses: np.ndarray
    centered: bool = False
    mean_coefs: Optional[np.ndarray] = None
    mean_response: float = 0.0
    deriv_coefs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        C = _frozen(np.atleast_2d(self.coefs))
        y = _frozen(np.ravel(self.responses))
        if C.shape[1] != self.basis.k:
            raise DimensionMismatchError(
                f"coefficient rows have length {C.shape[1]}, basis has k={self.basis.k}"
            )
        if C.shape[0] != y.size:
            raise DimensionMismatchError(f"{C.shape[0]} curves but {y.size} responses")
        if not (np.all(np.isfinite(C)) and np.all(np.isfinite(y))):
            raise ValueError("dataset contains non-finite values")
        mean = np.zeros(self.basis.k) if self.mean_coefs is None else self.mean_coefs
        _, D = derivative_map(self.basis)
        object.__setattr__(self, "coefs", C)
        object.__setattr__(self, "responses", y)
        object.__setattr__(self, "mean_coefs", _frozen(mean))
        object.__setattr__(self, "mean_response", float(self.mean_response))
        object.__setattr__(self, "deriv_coefs", _frozen(C @ D.T))

    @classmethod
    def from_curves(cls, curves: Sequence[Curve], responses) -> "FunctionalDataset":
        if len(curves) == 0:
            raise EmptyDataError("no curves given")
        basis = curves[0].basis
        for c in curves[1:]:
            _same_basis(curves[0], c)
        return cls(basis, np.stack([c.coefs for c in curves]), responses)

    @classmethod
    def from_samples(cls, abscissae, values, responses, basis: BSplineBasis) -> "FunctionalDataset":
        """Smooth each row of ``values`` onto ``basis``."""
        return cls(basis, np.atleast_2d(smooth_many(abscissae, values, basis)), responses)

    @property
    def n(self) -> int:
        return self.coefs.shape[0]

    @property
    def curves(self) -> List[Curve]:
        return [Curve(self.basis, c) for c in self.coefs]

    @property
    def derivatives(self) -> List[Curve]:
        dbasis, _ = derivative_map(self.basis)
        if dbasis is None:
            raise UnsupportedDegreeError("degree-0 curves have no derivatives")
        return [Curve(dbasis, c) for c in self.deriv_coefs]

    @property
    def mean_curve(self) -> Curve:
        return Curve(self.basis, self.mean_coefs)

    def subset(self, index) -> "FunctionalDataset":
        """Rows ``index`` as a new, uncentered dataset in the original units."""
        index = np.asarray(index)
        return FunctionalDataset(
            self.basis,
            self.coefs[index] + self.mean_coefs,
            self.responses[index] + self.mean_response,
        )


def center(dataset: FunctionalDataset):
    """Subtract the empirical means of curves and responses.

    Returns
    -------
    (FunctionalDataset, Curve, float)
        The centered dataset, the mean curve and the mean response.  Means
        are accumulated, so centering twice reports the original offsets.
    """
    if dataset.n == 0:
        raise EmptyDataError("cannot center an empty dataset")
    mc = dataset.coefs.mean(axis=0)
    my = float(dataset.responses.mean())
    total_c = dataset.mean_coefs + mc
    total_y = dataset.mean_response + my
    out = FunctionalDataset(
        dataset.basis,
        dataset.coefs - mc,
        dataset.responses - my,
        centered=True,
        mean_coefs=total_c,
        mean_response=total_y,
    )
    return out, Curve(dataset.basis, total_c), total_y
