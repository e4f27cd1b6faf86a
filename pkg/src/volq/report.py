"""Report assembly and serialization (JSON and CSV).

A Report mirrors the classical table layout of volatility studies: a
stationarity block (test/statistic/p-value rows), a GARCH block
(parameter/estimate/error/t/p rows in a0, a1..am, b1..bn order), a
standardized-residuals block, an SV block (seven parameter rows with
standard errors), and a forecast block of (t, observed, center, lower,
upper) rows.

Serialization is deterministic: fixed key order, no timestamps unless
requested, and floats emitted as shortest round-trip decimals, so a parsed
report reproduces the original values exactly. Non-finite numbers
(sentinel standard errors) serialize as null; p-values below 1e-16 print
as 0 while the raw value stays on the in-memory objects.
"""
from __future__ import annotations

import hashlib
import io
import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .diagnostics import DiagnosticsBattery
from .errors import LengthMismatch
from .garch import ForecastPath, GarchFit
from .series import TimeSeries
from .simulate import GENERATOR_ID
from .stationarity import TestReport
from .sv import PARAM_NAMES as SV_PARAM_NAMES
from .sv import SvFit

#: p-values below this threshold are serialized as exactly 0.
P_VALUE_PRINT_FLOOR = 1e-16


def _num(x: float) -> float | None:
    """JSON-safe number: non-finite values become null."""
    x = float(x)
    return x if math.isfinite(x) else None


def _pval(p: float) -> float:
    p = float(p)
    return 0.0 if p < P_VALUE_PRINT_FLOOR else p


def input_digest(path: str | Path) -> str:
    """sha256 of the input file, hex-encoded."""
    digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    return f"sha256:{digest}"


def _test_row(report: TestReport) -> dict:
    return {
        "test": report.test_name,
        "statistic": _num(report.statistic),
        "p_value": _pval(report.p_value),
        "p_clamped": report.p_clamped,
        "lag": report.lag,
        "decision": report.decision,
        "alpha": report.alpha,
    }


def stationarity_section(adf: TestReport, kpss: TestReport) -> dict:
    return {"adf": _test_row(adf), "kpss": _test_row(kpss)}


def garch_section(fit: GarchFit) -> dict:
    names = fit.model.param_names()
    estimates = fit.model.param_vector()
    rows = [
        {"parameter": name,
         "estimate": _num(est),
         "std_error": _num(se),
         "t_stat": _num(t),
         "p_value": _pval(p)}
        for name, est, se, t, p in zip(names, estimates, fit.std_errors,
                                       fit.t_stats, fit.p_values)
    ]
    return {
        "order": [fit.model.order_m, fit.model.order_n],
        "parameters": rows,
        "loglik": _num(fit.loglik),
        "persistence": _num(fit.model.persistence),
        "stationary": fit.model.is_stationary,
        "converged": fit.converged,
        "iterations": fit.iterations,
    }


def sv_section(fit: SvFit) -> dict:
    estimates = fit.params.param_vector()
    rows = [
        {"parameter": name, "estimate": _num(est), "std_error": _num(se)}
        for name, est, se in zip(SV_PARAM_NAMES, estimates, fit.std_errors)
    ]
    return {
        "parameters": rows,
        "p1": fit.params.p1,
        "loglik": _num(fit.loglik),
        "stationary": fit.params.is_stationary,
        "converged": fit.converged,
        "iterations": fit.iterations,
    }


def diagnostics_section(battery: DiagnosticsBattery) -> dict:
    rows = [
        {"test": label, "residuals": kind, "statistic": _num(rep.statistic),
         "p_value": _pval(rep.p_value), "decision": rep.decision}
        for label, kind, rep in battery.rows()
    ]
    return {"rows": rows}


def forecast_section(forecast: ForecastPath,
                     series: TimeSeries | None = None) -> dict:
    lower = forecast.lower()
    upper = forecast.upper()
    n_obs = len(series) if series is not None else 0
    if n_obs > forecast.center.size:
        raise LengthMismatch("series longer than the forecast path",
                             op="report.forecast_section")
    rows = []
    for t in range(forecast.center.size):
        rows.append({
            "t": t,
            "observed": _num(series.values[t]) if t < n_obs else None,
            "center": _num(forecast.center[t]),
            "lower": _num(lower[t]),
            "upper": _num(upper[t]),
        })
    return {"scale": forecast.scale, "rows": rows}


@dataclass
class Report:
    """One run's results, ready for serialization."""

    command: str
    input_digest: str | None = None
    timestamp: str | None = None
    stationarity: dict | None = None
    garch: dict | None = None
    sv: dict | None = None
    diagnostics: dict | None = None
    forecast: dict | None = None

    @staticmethod
    def now() -> str:
        return datetime.now(timezone.utc).isoformat(timespec="seconds")

    def to_dict(self) -> dict:
        metadata = {
            "command": self.command,
            "version": __version__,
            "generator": GENERATOR_ID,
        }
        if self.input_digest is not None:
            metadata["input_digest"] = self.input_digest
        if self.timestamp is not None:
            metadata["timestamp"] = self.timestamp
        out: dict = {"metadata": metadata}
        for key in ("stationarity", "garch", "sv", "diagnostics"):
            section = getattr(self, key)
            if section is not None:
                out[key] = section
        if self.forecast is not None:
            out["forecast"] = self.forecast["rows"]
            out["forecast_scale"] = self.forecast["scale"]
        return out


def emit_report(report: Report, format: str = "json") -> bytes:
    """Serialize a report deterministically to JSON or CSV bytes."""
    if format == "json":
        text = json.dumps(report.to_dict(), indent=2, allow_nan=False)
        return (text + "\n").encode("utf-8")
    if format == "csv":
        return _emit_csv(report)
    raise ValueError(f"unknown format {format!r}")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_table(out: io.StringIO, name: str, header: list[str],
                 rows: list[list]) -> None:
    out.write(f"[{name}]\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_csv_cell(v) for v in row) + "\n")
    out.write("\n")


def _emit_csv(report: Report) -> bytes:
    out = io.StringIO()
    d = report.to_dict()
    meta = d["metadata"]
    _write_table(out, "metadata", ["field", "value"],
                 [[k, meta[k]] for k in meta])
    if report.stationarity is not None:
        header = ["test", "statistic", "p_value", "p_clamped", "lag",
                  "decision", "alpha"]
        rows = [[row[h] for h in header]
                for row in (report.stationarity["adf"],
                            report.stationarity["kpss"])]
        _write_table(out, "stationarity", header, rows)
    if report.garch is not None:
        header = ["parameter", "estimate", "std_error", "t_stat", "p_value"]
        rows = [[row[h] for h in header]
                for row in report.garch["parameters"]]
        _write_table(out, "garch", header, rows)
    if report.sv is not None:
        header = ["parameter", "estimate", "std_error"]
        rows = [[row[h] for h in header] for row in report.sv["parameters"]]
        _write_table(out, "sv", header, rows)
    if report.diagnostics is not None:
        header = ["test", "residuals", "statistic", "p_value", "decision"]
        rows = [[row[h] for h in header]
                for row in report.diagnostics["rows"]]
        _write_table(out, "diagnostics", header, rows)
    if report.forecast is not None:
        header = ["t", "observed", "center", "lower", "upper"]
        rows = [[row[h] for h in header] for row in report.forecast["rows"]]
        _write_table(out, "forecast", header, rows)
    return out.getvalue().encode("utf-8")


def emit_plot_data(forecast: ForecastPath, series: TimeSeries) -> str:
    """Plot-ready CSV: one (t, observed, center, lower, upper) row per index.

    ``lower``/``upper`` are center -/+ half_width. The forecast may extend
    past the observed series (horizon steps); observed cells are then
    empty. A series longer than the forecast is a LengthMismatch.
    """
    if len(series) > forecast.center.size:
        raise LengthMismatch(
            f"series has {len(series)} points but forecast only "
            f"{forecast.center.size}", op="report.emit_plot_data")
    lower = forecast.lower()
    upper = forecast.upper()
    lines = ["t,observed,center,lower,upper"]
    for t in range(forecast.center.size):
        observed = repr(float(series.values[t])) if t < len(series) else ""
        lines.append(f"{t},{observed},{float(forecast.center[t])!r},"
                     f"{float(lower[t])!r},{float(upper[t])!r}")
    return "\n".join(lines) + "\n"
