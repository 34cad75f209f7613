"""Text formats: curve and response CSV files, model files and config files.

Curve CSV: the first row holds the abscissae, each later row one observed
curve.  Response CSV: one value per row, same order.  Numbers are written
with 17 significant digits so that reading them back is exact.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from .basis import BSplineBasis
from .curves import Curve, grams_for
from .errors import ConfigError, DimensionMismatchError, ParseError
from .estimator import FLRDFit, RidgeFLRFit

__all__ = [
    "fmt",
    "read_curves",
    "write_curves",
    "read_column",
    "write_column",
    "write_surface",
    "write_functions",
    "save_model",
    "load_model",
    "read_config",
]

PathLike = Union[str, Path]
MODEL_MAGIC = "flrd-model 1"


def fmt(x: float) -> str:
    """17-significant-digit decimal rendering."""
    return format(float(x), ".17g")


def _parse_float(text: str, row: int, column: int, path) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise ParseError(
            f"{path}: row {row}, column {column}: cannot parse {text.strip()!r} as a number",
            row=row,
            column=column,
        ) from None
    if not math.isfinite(value):
        raise ParseError(f"{path}: row {row}, column {column}: non-finite value", row=row, column=column)
    return value


def _read_rows(path: PathLike) -> List[List[float]]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for r, record in enumerate(csv.reader(fh), start=1):
            if not record or all(not cell.strip() for cell in record):
                continue
            rows.append([_parse_float(cell, r, c, path) for c, cell in enumerate(record, start=1)])
    return rows


def read_curves(path: PathLike) -> Tuple[np.ndarray, np.ndarray]:
    """Return ``(abscissae, values)`` with ``values`` of shape ``(n, m)``."""
    rows = _read_rows(path)
    if len(rows) < 2:
        raise ParseError(f"{path}: need an abscissa row and at least one curve")
    m = len(rows[0])
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != m:
            raise DimensionMismatchError(
                f"{path}: row {r} has {len(row)} values, abscissa row has {m}"
            )
    return np.array(rows[0]), np.array(rows[1:])


def write_curves(path: PathLike, abscissae, values) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([fmt(v) for v in abscissae])
        for row in np.atleast_2d(values):
            writer.writerow([fmt(v) for v in row])


def read_column(path: PathLike) -> np.ndarray:
    rows = _read_rows(path)
    for r, row in enumerate(rows, start=1):
        if len(row) != 1:
            raise ParseError(f"{path}: row {r} has {len(row)} columns, expected 1", row=r, column=2)
    return np.array([row[0] for row in rows])


def write_column(path: PathLike, values) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in np.ravel(values):
            fh.write(fmt(v) + "\n")


def write_surface(path: PathLike, result) -> None:
    """CV surface as ``alpha,beta,cvmsep`` rows."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["alpha", "beta", "cvmsep"])
        for a, b, s in result.rows():
            writer.writerow([fmt(a), fmt(b), fmt(s)])


def write_functions(path: PathLike, fit, m: int = 512) -> None:
    """Fitted coefficient functions on an ``m``-point grid, for plotting."""
    t = fit.basis.grid(m)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if isinstance(fit, FLRDFit):
            writer.writerow(["t", "phi", "psi"])
            cols = (fit.phi(t), fit.psi(t))
        else:
            writer.writerow(["t", "theta"])
            cols = (fit.theta(t),)
        for i, ti in enumerate(t):
            writer.writerow([fmt(ti)] + [fmt(c[i]) for c in cols])


def _vec(values) -> str:
    return " ".join(fmt(v) for v in values)


def save_model(path: PathLike, fit) -> None:
    """Write a fit as ``key value...`` lines."""
    basis = fit.basis
    lines = [
        MODEL_MAGIC,
        f"kind {'flrd' if isinstance(fit, FLRDFit) else 'ridge'}",
        f"domain {fmt(basis.domain[0])} {fmt(basis.domain[1])}",
        f"degree {basis.degree}",
        f"k {basis.k}",
        f"knots {_vec(basis.knots)}",
    ]
    if isinstance(fit, FLRDFit):
        lines += [
            f"alpha {fmt(fit.alpha)}",
            f"beta {fmt(fit.beta)}",
            f"phi {_vec(fit.phi.coefs)}",
            f"psi {_vec(fit.psi.coefs)}",
        ]
    else:
        lines += [f"beta {fmt(fit.beta)}", f"theta {_vec(fit.theta.coefs)}"]
    lines += [
        f"mean_response {fmt(fit.mean_response)}",
        f"mean_curve {_vec(fit.mean_curve.coefs)}",
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: PathLike):
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text or text[0].strip() != MODEL_MAGIC:
        raise ParseError(f"{path}: not a model file (missing '{MODEL_MAGIC}' header)", row=1)
    fields: Dict[str, Tuple[int, List[str]]] = {}
    for r, line in enumerate(text[1:], start=2):
        parts = line.split()
        if parts:
            fields[parts[0]] = (r, parts[1:])

    def nums(key):
        if key not in fields:
            raise ParseError(f"{path}: missing field '{key}'")
        row, values = fields[key]
        return np.array([_parse_float(v, row, c, path) for c, v in enumerate(values, start=2)])

    kind = fields.get("kind", (0, [""]))[1][0]
    domain = nums("domain")
    degree, k = int(nums("degree")[0]), int(nums("k")[0])
    basis = BSplineBasis((domain[0], domain[1]), degree, nums("knots"))
    if basis.k != k:
        raise ParseError(f"{path}: knot vector gives k={basis.k}, header says k={k}")
    mean_curve = Curve(basis, nums("mean_curve"))
    mean_response = float(nums("mean_response")[0])
    if kind == "flrd":
        return FLRDFit(
            phi=Curve(basis, nums("phi")),
            psi=Curve(grams_for(basis).deriv_basis, nums("psi")),
            alpha=float(nums("alpha")[0]),
            beta=float(nums("beta")[0]),
            mean_curve=mean_curve,
            mean_response=mean_response,
        )
    if kind == "ridge":
        return RidgeFLRFit(
            theta=Curve(basis, nums("theta")),
            beta=float(nums("beta")[0]),
            mean_curve=mean_curve,
            mean_response=mean_response,
        )
    raise ParseError(f"{path}: unknown model kind {kind!r}")


def read_config(path: PathLike) -> Dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys read as underscores."""
    config = {}
    for r, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}: line {r}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"{path}: line {r}: empty key")
        config[key.replace("-", "_")] = value
    return config
