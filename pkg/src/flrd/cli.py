"""Command line front end: ``flrd {fit,cv,predict,eval,simulate}``.

Every option can also be given in a flat ``key = value`` config file passed
with ``--config``; command-line flags override the file.  Errors go to
stderr as ``error:<kind>: message`` with a nonzero exit status.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import io
from .basis import build_basis, eval_basis
from .curves import FunctionalDataset, grams_for
from .errors import (
    BasisMismatchError,
    ConfigError,
    DimensionMismatchError,
    EmptyDataError,
    FLRDError,
)
from .estimator import FLRDFit, fit_flr_ridge, fit_flrd, msep
from .selection import default_grid, grid_search
from .simulate import SyntheticSpec, generate, polynomial_decay, smooth_truth

# option name -> converter; every option is accepted both as a flag and as a config key
OPTIONS = {
    "curves": str,
    "responses": str,
    "validation_curves": str,
    "validation_responses": str,
    "predictions": str,
    "model": str,
    "out": str,
    "functions_out": str,
    "method": str,
    "alpha": float,
    "beta": float,
    "alpha_grid": str,
    "beta_grid": str,
    "k": int,
    "degree": int,
    "domain": str,
    "seed": int,
    "n": int,
    "sigma_eps": float,
    "decay": float,
    "points": int,
    "jobs": int,
}

DEFAULTS = {"k": 20, "degree": 3, "method": "flrd", "points": 256, "decay": 2.0, "sigma_eps": 0.1, "seed": 0}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"error:usage: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH")
    for name, conv in OPTIONS.items():
        metavar = {str: "PATH", float: "R", int: "N"}[conv]
        if name in ("alpha_grid", "beta_grid"):
            metavar = "R,R,..."
        elif name == "domain":
            metavar = "A,B"
        elif name == "method":
            metavar = "{flrd,ridge}"
        common.add_argument("--" + name.replace("_", "-"), dest=name, metavar=metavar, default=None)

    parser = _Parser(prog="flrd", description="Functional linear regression with derivatives.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("fit", parents=[common], help="fit a model and write it to --model/--out")
    sub.add_parser("cv", parents=[common], help="leave-one-out grid search over (alpha, beta)")
    sub.add_parser("predict", parents=[common], help="predict responses for --curves with --model")
    sub.add_parser("eval", parents=[common], help="mean squared error of predictions")
    sub.add_parser("simulate", parents=[common], help="write a synthetic dataset to the --out directory")
    return parser


def _settings(args: argparse.Namespace) -> Dict[str, object]:
    raw: Dict[str, str] = {}
    if args.config:
        raw.update(io.read_config(args.config))
    for name in OPTIONS:
        value = getattr(args, name)
        if value is not None:
            raw[name] = value
    unknown = sorted(set(raw) - set(OPTIONS))
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    settings: Dict[str, object] = {}
    for name, value in raw.items():
        try:
            settings[name] = OPTIONS[name](value)
        except ValueError:
            raise ConfigError(f"bad value for {name}: {value!r}") from None
    return settings


def _get(settings, name):
    return settings.get(name, DEFAULTS.get(name))


def _require(settings, *names):
    missing = [n for n in names if settings.get(n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise ConfigError(f"missing required setting(s): {flags}")
    return [settings[n] for n in names]


def _floats(text: str, name: str) -> List[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"bad number list for {name}: {text!r}") from None


def _domain(settings, abscissae=None):
    if settings.get("domain") is not None:
        values = _floats(settings["domain"], "domain")
        if len(values) != 2:
            raise ConfigError("domain needs exactly two numbers A,B")
        return values[0], values[1]
    if abscissae is None:
        return 0.0, 1.0
    return float(abscissae[0]), float(abscissae[-1])


def _load_dataset(settings, curves_key, responses_key, basis=None) -> FunctionalDataset:
    curves_path, responses_path = _require(settings, curves_key, responses_key)
    abscissae, values = io.read_curves(curves_path)
    responses = io.read_column(responses_path)
    if values.shape[0] != responses.size:
        raise DimensionMismatchError(
            f"{values.shape[0]} curves in {curves_path} but {responses.size} responses in {responses_path}"
        )
    if basis is None:
        basis = build_basis(_domain(settings, abscissae), _get(settings, "k"), _get(settings, "degree"))
    return FunctionalDataset.from_samples(abscissae, values, responses, basis)


def _rms(values) -> float:
    return float(np.sqrt(np.mean(np.square(values))))


def cmd_fit(settings, out=sys.stdout) -> int:
    data = _load_dataset(settings, "curves", "responses")
    grams = grams_for(data.basis)
    method = _get(settings, "method")
    if method == "ridge":
        beta, = _require(settings, "beta")
        fit = fit_flr_ridge(data, grams, beta)
    elif method == "flrd":
        alpha, beta = _require(settings, "alpha", "beta")
        fit = fit_flrd(data, grams, alpha, beta)
    else:
        raise ConfigError(f"unknown method {method!r}")
    model_path = settings.get("model") or settings.get("out")
    if model_path is None:
        raise ConfigError("missing required setting: --model (or --out)")
    io.save_model(model_path, fit)
    if settings.get("functions_out"):
        io.write_functions(settings["functions_out"], fit)
    basis = data.basis
    print(f"method = {method}", file=out)
    print(f"n = {data.n}", file=out)
    print(f"k = {basis.k}", file=out)
    print(f"degree = {basis.degree}", file=out)
    print(f"domain = {io.fmt(basis.domain[0])},{io.fmt(basis.domain[1])}", file=out)
    if isinstance(fit, FLRDFit):
        print(f"alpha = {io.fmt(fit.alpha)}", file=out)
    print(f"beta = {io.fmt(fit.beta)}", file=out)
    print(f"in_sample_rms = {io.fmt(_rms(data.responses - fit.predict(data)))}", file=out)
    if settings.get("validation_curves") or settings.get("validation_responses"):
        valid = _load_dataset(settings, "validation_curves", "validation_responses", basis=basis)
        print(f"validation_msep = {io.fmt(msep(fit, valid))}", file=out)
    print(f"model = {model_path}", file=out)
    return 0


def cmd_cv(settings, out=sys.stdout) -> int:
    data = _load_dataset(settings, "curves", "responses")
    alphas = _floats(settings["alpha_grid"], "alpha_grid") if settings.get("alpha_grid") else default_grid()
    betas = _floats(settings["beta_grid"], "beta_grid") if settings.get("beta_grid") else default_grid()
    result = grid_search(data, grams_for(data.basis), alphas, betas, n_jobs=settings.get("jobs"))
    if settings.get("out"):
        io.write_surface(settings["out"], result)
    print(f"cells = {result.scores.size}", file=out)
    print(f"best_alpha = {io.fmt(result.best_alpha)}", file=out)
    print(f"best_beta = {io.fmt(result.best_beta)}", file=out)
    print(f"best_cvmsep = {io.fmt(result.best_score)}", file=out)
    return 0


def _model_dataset(settings, curves_key="curves", responses_key=None):
    model_path, = _require(settings, "model")
    fit = io.load_model(model_path)
    basis = fit.basis
    for key, have in (("k", basis.k), ("degree", basis.degree)):
        if key in settings and settings[key] != have:
            raise BasisMismatchError(f"{key}={settings[key]} requested but the model has {key}={have}")
    if settings.get("domain") is not None and _domain(settings) != basis.domain:
        raise BasisMismatchError(f"domain {settings['domain']} differs from the model domain {basis.domain}")
    curves_path, = _require(settings, curves_key)
    abscissae, values = io.read_curves(curves_path)
    a, b = basis.domain
    span = b - a
    if abscissae[0] < a - 1e-12 * span or abscissae[-1] > b + 1e-12 * span:
        raise BasisMismatchError(
            f"abscissae [{abscissae[0]}, {abscissae[-1]}] fall outside the model domain [{a}, {b}]"
        )
    if responses_key is None:
        responses = np.zeros(values.shape[0])
    else:
        responses = io.read_column(_require(settings, responses_key)[0])
        if responses.size != values.shape[0]:
            raise DimensionMismatchError(f"{values.shape[0]} curves but {responses.size} responses")
    return fit, FunctionalDataset.from_samples(abscissae, values, responses, basis)


def cmd_predict(settings, out=sys.stdout) -> int:
    fit, data = _model_dataset(settings)
    pred = fit.predict(data)
    if settings.get("out"):
        io.write_column(settings["out"], pred)
    else:
        for v in pred:
            print(io.fmt(v), file=out)
    return 0


def cmd_eval(settings, out=sys.stdout) -> int:
    if settings.get("predictions"):
        pred = io.read_column(settings["predictions"])
        truth = io.read_column(_require(settings, "responses")[0])
        if pred.size != truth.size:
            raise DimensionMismatchError(f"{pred.size} predictions but {truth.size} responses")
        if pred.size == 0:
            raise EmptyDataError("no predictions to evaluate")
        value = float(np.mean((truth - pred) ** 2))
    else:
        fit, data = _model_dataset(settings, responses_key="responses")
        value = msep(fit, data)
    print(f"msep = {io.fmt(value)}", file=out)
    return 0


def cmd_simulate(settings, out=sys.stdout) -> int:
    out_dir, n = _require(settings, "out", "n")
    basis = build_basis(_domain(settings), _get(settings, "k"), _get(settings, "degree"))
    grams = grams_for(basis)
    decay = _get(settings, "decay")
    lam = polynomial_decay(basis.k, decay)
    phi, psi = smooth_truth(grams, lam)
    spec = SyntheticSpec(n, lam, phi, psi, _get(settings, "sigma_eps"), _get(settings, "seed"))
    data, y_star = generate(spec, grams)
    t = basis.grid(_get(settings, "points"))
    values = data.coefs @ eval_basis(basis, t).T
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    io.write_curves(out_dir / "curves.csv", t, values)
    io.write_column(out_dir / "responses.csv", data.responses)
    io.write_column(out_dir / "oracle.csv", y_star)
    manifest = [
        f"n = {spec.n}",
        f"k = {basis.k}",
        f"degree = {basis.degree}",
        f"domain = {io.fmt(basis.domain[0])},{io.fmt(basis.domain[1])}",
        f"points = {t.size}",
        f"seed = {spec.seed}",
        f"sigma_eps = {io.fmt(spec.sigma_eps)}",
        f"decay = {io.fmt(decay)}",
        f"eigenvalues = {','.join(io.fmt(v) for v in lam)}",
        f"true_phi = {','.join(io.fmt(v) for v in phi.coefs)}",
        f"true_psi = {','.join(io.fmt(v) for v in psi.coefs)}",
    ]
    (out_dir / "manifest.txt").write_text("\n".join(manifest) + "\n", encoding="utf-8")
    for line in manifest[:9]:
        print(line, file=out)
    return 0


COMMANDS = {
    "fit": cmd_fit,
    "cv": cmd_cv,
    "predict": cmd_predict,
    "eval": cmd_eval,
    "simulate": cmd_simulate,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        settings = _settings(args)
        return COMMANDS[args.command](settings, sys.stdout)
    except FLRDError as err:
        print(f"error:{err.kind}: {err}", file=sys.stderr)
    except OSError as err:
        print(f"error:io: {err}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
