"""Command-line interface.

Subcommands compose the library: ``stationarity`` screens a series with
ADF and KPSS, ``fit-garch``/``fit-sv`` estimate and report, ``diagnose``
runs the residual battery on standardized residuals, ``forecast`` emits
prediction bands, ``simulate`` writes seeded synthetic datasets, and
``report`` bundles the whole workflow into one document. When an output
file is given, the forecast/report paths also render figures next to it
(disable with --no-figures).

Exit codes: 0 success, 1 usage error, 2 data error, 3 convergence failure.
Error messages name the failing stage. Set VOLQ_LOG={error,warn,info,debug}
for log verbosity.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dataio import load_csv
from .diagnostics import run_battery
from .errors import (DegenerateVariance, InvalidFit, InvalidParams,
                     LengthMismatch, NonConvergence, NonFiniteObjective,
                     NonFiniteValue, NonPositiveValue, NumericalOverflow,
                     ParseError, SingularRegression, TooShort, VolqError)
from .garch import GarchModel, fit_garch, garch_forecast, standardized_residuals
from .optimize import OptimizerConfig
from .report import (Report, diagnostics_section, emit_plot_data, emit_report,
                     forecast_section, garch_section, input_digest,
                     stationarity_section, sv_section)
from .series import histogram_with_normal
from .simulate import (Ar1Params, GENERATOR_ID, RandomWalkParams, SimSpec,
                       WhiteNoiseParams, simulate)
from .stationarity import adf_test, kpss_test
from .sv import SvParams, fit_sv, sv_predict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_CONVERGENCE = 3

_DATA_ERRORS = (TooShort, NonPositiveValue, DegenerateVariance, InvalidParams,
                ParseError, NonFiniteValue, SingularRegression,
                LengthMismatch, InvalidFit, NumericalOverflow,
                FileNotFoundError)
_CONVERGENCE_ERRORS = (NonConvergence, NonFiniteObjective)

_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING,
               "info": logging.INFO, "debug": logging.DEBUG}


def _column(raw: str) -> str | int:
    try:
        return int(raw)
    except ValueError:
        return raw


def _io_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--input", required=True, help="input CSV file")
    parent.add_argument("--column", default="0",
                        help="target column, by name or zero-based index")
    parent.add_argument("--no-header", action="store_true",
                        help="input CSV has no header row")
    parent.add_argument("--output", help="output file (stdout when omitted)")
    parent.add_argument("--format", choices=("json", "csv"), default="json")
    parent.add_argument("--no-timestamp", action="store_true",
                        help="omit the timestamp from report metadata")
    return parent


def _optimizer_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--max-iter", type=int, default=500)
    parent.add_argument("--grad-tol", type=float, default=1e-6)
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="volq",
        description="Volatility modeling and forecasting for stationary "
                    "time series.")
    parser.add_argument("--version", action="version",
                        version=f"volq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    io_parent = _io_parent()
    opt_parent = _optimizer_parent()

    p = sub.add_parser("stationarity", parents=[io_parent],
                       help="ADF and KPSS pre-screening")
    p.add_argument("--lag", type=int, help="test lag (default: Schwert rule)")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--adf-regression", choices=("none", "drift", "trend"),
                   default="trend")

    p = sub.add_parser("fit-garch", parents=[io_parent, opt_parent],
                       help="fit a GARCH(m, n) model")
    p.add_argument("--m", type=int, default=1, help="ARCH order (m >= 1)")
    p.add_argument("--n", type=int, default=1, help="GARCH order (n >= 0)")

    sub.add_parser("fit-sv", parents=[io_parent, opt_parent],
                   help="fit the stochastic-volatility model")

    p = sub.add_parser("diagnose", parents=[io_parent, opt_parent],
                       help="residual test battery on a fitted model")
    p.add_argument("--model", choices=("garch",), default="garch")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1)

    p = sub.add_parser("forecast", parents=[io_parent, opt_parent],
                       help="one-step-ahead volatility band")
    p.add_argument("--model", choices=("garch", "sv"), default="garch")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--horizon", type=int, default=1)
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("simulate", help="write a seeded synthetic dataset")
    p.add_argument("--kind", required=True,
                   choices=("garch", "sv", "white_noise", "random_walk", "ar1"))
    p.add_argument("--n", type=int, required=True, help="series length")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=500)
    p.add_argument("--params", help="JSON object of model parameters")
    p.add_argument("--output", help="output CSV (stdout when omitted)")

    p = sub.add_parser("report", parents=[io_parent, opt_parent],
                       help="full workflow: screening, fits, diagnostics, "
                            "forecast")
    p.add_argument("--model", choices=("garch", "sv"), default="garch",
                   help="engine used for the forecast block")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--lag", type=int)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--horizon", type=int, default=1)
    p.add_argument("--no-figures", action="store_true")
    return parser


def _load_series(args):
    return load_csv(args.input, column=_column(args.column),
                    has_header=not args.no_header)


def _opt_config(args) -> OptimizerConfig:
    return OptimizerConfig(max_iter=args.max_iter, grad_tol=args.grad_tol)


def _new_report(args) -> Report:
    return Report(command=args.command,
                  input_digest=input_digest(args.input),
                  timestamp=None if args.no_timestamp else Report.now())


def _write_output(data: bytes | str, output: str | None) -> None:
    if isinstance(data, str):
        data = data.encode("utf-8")
    if output:
        Path(output).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


def _render_figures(args, series, forecast=None) -> None:
    if getattr(args, "no_figures", True) or not args.output:
        return
    from .plotting import render_forecast_figure, render_histogram_figure
    stem = Path(args.output)
    try:
        hist = histogram_with_normal(series, bins=50)
        render_histogram_figure(hist, stem.with_name(stem.stem + "_histogram.png"),
                                title=f"Histogram: {series.label}")
    except DegenerateVariance:
        logger.warning("skipping histogram figure: constant series")
    if forecast is not None:
        render_forecast_figure(forecast, series,
                               stem.with_name(stem.stem + "_forecast.png"))


def _cmd_stationarity(args) -> int:
    series = _load_series(args)
    adf = adf_test(series, lag=args.lag, alpha=args.alpha,
                   regression=args.adf_regression)
    kpss = kpss_test(series, lag=args.lag, alpha=args.alpha)
    report = _new_report(args)
    report.stationarity = stationarity_section(adf, kpss)
    _write_output(emit_report(report, args.format), args.output)
    return EXIT_OK


def _cmd_fit_garch(args) -> int:
    series = _load_series(args)
    fit = fit_garch(series, m=args.m, n=args.n, config=_opt_config(args))
    report = _new_report(args)
    report.garch = garch_section(fit)
    _write_output(emit_report(report, args.format), args.output)
    if not fit.converged:
        print("fit-garch: garch.fit_garch did not converge", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


def _cmd_fit_sv(args) -> int:
    series = _load_series(args)
    fit = fit_sv(series, config=_opt_config(args))
    report = _new_report(args)
    report.sv = sv_section(fit)
    _write_output(emit_report(report, args.format), args.output)
    if not fit.converged:
        print("fit-sv: sv.fit_sv did not converge", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


def _cmd_diagnose(args) -> int:
    series = _load_series(args)
    fit = fit_garch(series, m=args.m, n=args.n, config=_opt_config(args))
    residuals = standardized_residuals(fit, series, allow_unconverged=True)
    battery = run_battery(residuals)
    report = _new_report(args)
    report.garch = garch_section(fit)
    report.diagnostics = diagnostics_section(battery)
    _write_output(emit_report(report, args.format), args.output)
    if not fit.converged:
        print("diagnose: garch.fit_garch did not converge", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


def _forecast_for(args, series):
    if args.model == "garch":
        fit = fit_garch(series, m=args.m, n=args.n, config=_opt_config(args))
        path = garch_forecast(fit, series, horizon=args.horizon,
                              allow_unconverged=True)
    else:
        fit = fit_sv(series, config=_opt_config(args))
        path = sv_predict(fit, horizon=args.horizon, allow_unconverged=True)
    return fit, path


def _cmd_forecast(args) -> int:
    series = _load_series(args)
    fit, path = _forecast_for(args, series)
    if args.format == "csv":
        _write_output(emit_plot_data(path, series), args.output)
    else:
        report = _new_report(args)
        if args.model == "garch":
            report.garch = garch_section(fit)
        else:
            report.sv = sv_section(fit)
        report.forecast = forecast_section(path, series)
        _write_output(emit_report(report, "json"), args.output)
    _render_figures(args, series, path)
    if not fit.converged:
        print(f"forecast: {args.model} fit did not converge", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


def _params_from_json(kind: str, raw: str | None):
    if raw is None:
        return None
    try:
        data = dict(json.loads(raw))
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise ParseError(f"--params is not a JSON object: {exc}",
                         op="cli.simulate") from None
    if kind == "garch":
        a = data.get("a", [data["a1"]] if "a1" in data else [0.10])
        b = data.get("b", [data["b1"]] if "b1" in data else [0.85])
        return GarchModel(a0=float(data.get("a0", 1e-6)),
                          a=tuple(float(v) for v in np.atleast_1d(a)),
                          b=tuple(float(v) for v in np.atleast_1d(b)))
    if kind == "sv":
        return SvParams(alpha0=float(data.get("alpha0", 0.0)),
                        alpha1=float(data.get("alpha1", 0.96)),
                        sigma_w=float(data.get("sigma_w", 0.3)),
                        lam=float(data.get("lambda", data.get("lam", -10.0))),
                        sigma0=float(data.get("sigma0", 1.0)),
                        phi1=float(data.get("phi1", -4.0)),
                        sigma1=float(data.get("sigma1", 3.0)),
                        p1=float(data.get("p1", 0.5)))
    if kind == "white_noise":
        return WhiteNoiseParams(mean=float(data.get("mean", 0.0)),
                                sd=float(data.get("sd", 1.0)))
    if kind == "random_walk":
        return RandomWalkParams(sd=float(data.get("sd", 1.0)),
                                start=float(data.get("start", 0.0)))
    return Ar1Params(intercept=float(data.get("intercept", 0.0)),
                     phi=float(data.get("phi", 0.5)),
                     sd=float(data.get("sd", 1.0)))


_LATENT_COLUMN = {"garch": "sigma2", "sv": "log_vol"}


def _cmd_simulate(args) -> int:
    params = _params_from_json(args.kind, args.params)
    spec = SimSpec(kind=args.kind, n=args.n, seed=args.seed,
                   params=params, burn_in=args.burn_in)
    result = simulate(spec)
    lines = [f"# generator: {GENERATOR_ID} kind={spec.kind} "
             f"seed={spec.seed} n={spec.n} burn_in={spec.burn_in}"]
    latent_name = _LATENT_COLUMN.get(spec.kind)
    if latent_name is not None:
        latent = result.latent[latent_name]
        lines.append(f"value,{latent_name}")
        for v, s in zip(result.series.values, latent):
            lines.append(f"{float(v)!r},{float(s)!r}")
    else:
        lines.append("value")
        lines.extend(repr(float(v)) for v in result.series.values)
    _write_output("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_report(args) -> int:
    series = _load_series(args)
    report = _new_report(args)
    adf = adf_test(series, lag=args.lag, alpha=args.alpha)
    kpss = kpss_test(series, lag=args.lag, alpha=args.alpha)
    report.stationarity = stationarity_section(adf, kpss)

    config = _opt_config(args)
    garch_fit = fit_garch(series, m=args.m, n=args.n, config=config)
    report.garch = garch_section(garch_fit)
    residuals = standardized_residuals(garch_fit, series,
                                       allow_unconverged=True)
    report.diagnostics = diagnostics_section(run_battery(residuals))
    sv_fit = fit_sv(series, config=config)
    report.sv = sv_section(sv_fit)

    if args.model == "garch":
        path = garch_forecast(garch_fit, series, horizon=args.horizon,
                              allow_unconverged=True)
    else:
        path = sv_predict(sv_fit, horizon=args.horizon,
                          allow_unconverged=True)
    report.forecast = forecast_section(path, series)
    _write_output(emit_report(report, args.format), args.output)
    _render_figures(args, series, path)
    for name, fit in (("garch.fit_garch", garch_fit), ("sv.fit_sv", sv_fit)):
        if not fit.converged:
            print(f"report: {name} did not converge", file=sys.stderr)
            return EXIT_CONVERGENCE
    return EXIT_OK


_HANDLERS = {
    "stationarity": _cmd_stationarity,
    "fit-garch": _cmd_fit_garch,
    "fit-sv": _cmd_fit_sv,
    "diagnose": _cmd_diagnose,
    "forecast": _cmd_forecast,
    "simulate": _cmd_simulate,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    level = _LOG_LEVELS.get(os.environ.get("VOLQ_LOG", "warn").lower(),
                            logging.WARNING)
    logging.basicConfig(level=level,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return _HANDLERS[args.command](args)
    except _CONVERGENCE_ERRORS as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except _DATA_ERRORS as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
