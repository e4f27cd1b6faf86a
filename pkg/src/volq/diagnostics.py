"""Residual test battery: Jarque-Bera, Shapiro-Wilk, Ljung-Box, LM-ARCH.

The battery runs on standardized residuals of a volatility fit. On a
well-specified fit with heavy-tailed innovations the expected pattern is:
normality tests reject, while Ljung-Box on squared residuals and LM-ARCH
fail to reject (no volatility structure left to explain).

Ljung-Box degrees of freedom default to the lag itself (fitdf = 0);
serializers report p-values below 1e-16 as 0 while the raw value is kept
on the report object.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2
from scipy.stats import shapiro as _scipy_shapiro

from .errors import DegenerateVariance, SingularRegression, TooShort
from .series import TimeSeries, summary_stats
from .stationarity import TestReport, _decision

#: Ljung-Box lags reported by the battery.
BATTERY_LAGS = (10, 15, 20)
#: Default LM-ARCH lag.
LM_ARCH_LAG = 12
#: Shapiro-Wilk sample cap; larger series are stride-subsampled.
SW_MAX_N = 5000


@dataclass(frozen=True)
class DiagnosticsBattery:
    """Full residual battery in fixed report order."""

    jb: TestReport
    sw: TestReport
    lb_r: tuple[TestReport, ...]
    lb_r2: tuple[TestReport, ...]
    lm_arch: TestReport

    def rows(self) -> list[tuple[str, str, TestReport]]:
        """(test label, residual kind, report) in canonical table order."""
        out = [("jarque_bera", "R", self.jb), ("shapiro_wilk", "R", self.sw)]
        out += [(f"ljung_box_q{r.lag}", "R", r) for r in self.lb_r]
        out += [(f"ljung_box_q{r.lag}", "R2", r) for r in self.lb_r2]
        out.append(("lm_arch", "R", self.lm_arch))
        return out


def jarque_bera(series: TimeSeries, alpha: float = 0.05) -> TestReport:
    """JB = n/6 * (S^2 + K^2/4) against chi-square(2); population moments."""
    if len(series) < 8:
        raise TooShort("need at least 8 observations",
                       op="diagnostics.jarque_bera")
    stats = summary_stats(series)
    if stats.variance == 0.0:
        raise DegenerateVariance("series is constant",
                                 op="diagnostics.jarque_bera")
    n = stats.n
    stat = n / 6.0 * (stats.skewness ** 2 + stats.excess_kurtosis ** 2 / 4.0)
    p = float(chi2.sf(stat, 2))
    return TestReport(test_name="JB", statistic=float(stat), p_value=p,
                      decision=_decision(p, alpha), alpha=alpha)


def shapiro_wilk(series: TimeSeries, alpha: float = 0.05) -> TestReport:
    """Shapiro-Wilk W via the Royston approximation (scipy backend).

    The approximation is valid to n = 5000; longer series are reduced by a
    deterministic stride subsample and the report is flagged.
    """
    n = len(series)
    if n < 3:
        raise TooShort("need at least 3 observations",
                       op="diagnostics.shapiro_wilk")
    values = series.values
    if np.all(values == values[0]):
        raise DegenerateVariance("series is constant",
                                 op="diagnostics.shapiro_wilk")
    detail = None
    if n > SW_MAX_N:
        idx = np.unique(np.linspace(0, n - 1, SW_MAX_N).astype(np.intp))
        values = values[idx]
        detail = f"subsampled {idx.size} of {n}"
    stat, p = _scipy_shapiro(values)
    return TestReport(test_name="SW", statistic=float(stat),
                      p_value=float(p), decision=_decision(float(p), alpha),
                      alpha=alpha, detail=detail)


def ljung_box(series: TimeSeries, lag: int, fitdf: int = 0,
              alpha: float = 0.05) -> TestReport:
    """Q = n(n+2) * sum rho_k^2/(n-k) against chi-square(lag - fitdf)."""
    n = len(series)
    if not 0 < lag < n:
        raise TooShort(f"lag must satisfy 0 < lag < n (lag={lag}, n={n})",
                       op="diagnostics.ljung_box")
    if not 0 <= fitdf < lag:
        raise ValueError("fitdf must satisfy 0 <= fitdf < lag")
    x = series.values - np.mean(series.values)
    denom = float(x @ x)
    if denom == 0.0:
        raise DegenerateVariance("series is constant",
                                 op="diagnostics.ljung_box")
    q = 0.0
    for k in range(1, lag + 1):
        rho = float(x[k:] @ x[:-k]) / denom
        q += rho * rho / (n - k)
    stat = n * (n + 2.0) * q
    p = float(chi2.sf(stat, lag - fitdf))
    return TestReport(test_name="LB", statistic=float(stat), p_value=p,
                      lag=lag, decision=_decision(p, alpha), alpha=alpha,
                      detail=f"fitdf={fitdf}")


def lm_arch(series: TimeSeries, lag: int = LM_ARCH_LAG,
            alpha: float = 0.05) -> TestReport:
    """ARCH LM test: T*R^2 from regressing y^2 on its own lags."""
    n = len(series)
    if n <= lag + 1:
        raise TooShort(f"need more than {lag + 1} observations",
                       op="diagnostics.lm_arch")
    x2 = series.values ** 2
    rows = n - lag
    cols = [np.ones(rows)]
    for i in range(1, lag + 1):
        cols.append(x2[lag - i:n - i])
    design = np.column_stack(cols)
    target = x2[lag:]
    beta, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < design.shape[1]:
        raise SingularRegression("lagged squared series are collinear",
                                 op="diagnostics.lm_arch")
    resid = target - design @ beta
    tss = float(np.sum((target - np.mean(target)) ** 2))
    if tss == 0.0:
        raise DegenerateVariance("squared series is constant",
                                 op="diagnostics.lm_arch")
    r_squared = 1.0 - float(resid @ resid) / tss
    stat = rows * r_squared
    p = float(chi2.sf(stat, lag))
    return TestReport(test_name="LMARCH", statistic=float(stat), p_value=p,
                      lag=lag, decision=_decision(p, alpha), alpha=alpha)


def run_battery(residuals: TimeSeries, fitdf: int = 0,
                lags: tuple[int, ...] = BATTERY_LAGS,
                lm_lag: int = LM_ARCH_LAG,
                alpha: float = 0.05) -> DiagnosticsBattery:
    """All residual tests at the canonical lags, composed bit-for-bit from
    the standalone operations."""
    squared = residuals.with_values(residuals.values ** 2,
                                    label=residuals.label + "-sq")
    return DiagnosticsBattery(
        jb=jarque_bera(residuals, alpha=alpha),
        sw=shapiro_wilk(residuals, alpha=alpha),
        lb_r=tuple(ljung_box(residuals, lag, fitdf=fitdf, alpha=alpha)
                   for lag in lags),
        lb_r2=tuple(ljung_box(squared, lag, fitdf=fitdf, alpha=alpha)
                    for lag in lags),
        lm_arch=lm_arch(residuals, lag=lm_lag, alpha=alpha),
    )
