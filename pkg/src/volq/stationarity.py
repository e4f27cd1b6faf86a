"""Unit-root screening: augmented Dickey-Fuller and KPSS tests.

P-values come from embedded published quantile tables (Fuller 1976 for the
Dickey-Fuller t-distribution; Kwiatkowski et al. 1992 for KPSS), linearly
interpolated in both tail probability and 1/n and clamped at the table
edges. Clamping is reported explicitly: a strongly stationary series shows
ADF p = 0.01 (at_lower) and KPSS p = 0.10 (at_upper).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateVariance, SingularRegression, TooShort
from .series import TimeSeries

ADF_REGRESSIONS = ("none", "drift", "trend")

# Dickey-Fuller t-statistic percentiles, rows n = 25/50/100/250/500/inf,
# columns tail probability 0.01/0.025/0.05/0.10/0.90/0.95/0.975/0.99.
_DF_TABLE_N = np.array([25.0, 50.0, 100.0, 250.0, 500.0, np.inf])
_DF_TABLE_P = np.array([0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99])
_DF_CRIT = {
    "trend": np.array([
        [-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15],
        [-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24],
        [-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28],
        [-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31],
        [-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32],
        [-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33],
    ]),
    "drift": np.array([
        [-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72],
        [-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66],
        [-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63],
        [-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62],
        [-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61],
        [-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60],
    ]),
    "none": np.array([
        [-2.66, -2.26, -1.95, -1.60, 0.92, 1.33, 1.70, 2.16],
        [-2.62, -2.25, -1.95, -1.61, 0.91, 1.31, 1.66, 2.08],
        [-2.60, -2.24, -1.95, -1.61, 0.90, 1.29, 1.64, 2.03],
        [-2.58, -2.23, -1.95, -1.62, 0.89, 1.29, 1.63, 2.01],
        [-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00],
        [-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00],
    ]),
}

# KPSS statistic percentiles (level stationarity; asymptotic), tail
# probabilities 0.10/0.05/0.025/0.01. Larger statistics mean smaller p.
_KPSS_TABLE_P = np.array([0.10, 0.05, 0.025, 0.01])
_KPSS_CRIT = {
    "level": np.array([0.347, 0.463, 0.574, 0.739]),
    "trend": np.array([0.119, 0.146, 0.176, 0.216]),
}


@dataclass(frozen=True)
class TestReport:
    """Outcome of one hypothesis test.

    ``p_clamped`` is ``at_lower``/``at_upper`` exactly when the raw
    interpolated p-value exits the embedded table range; ``decision`` is
    ``reject_null`` iff ``p_value < alpha`` (strict).
    """

    test_name: str
    statistic: float
    p_value: float
    p_clamped: str = "none"
    lag: int = 0
    decision: str = "fail_to_reject"
    alpha: float = 0.05
    detail: str | None = None


def _decision(p_value: float, alpha: float) -> str:
    return "reject_null" if p_value < alpha else "fail_to_reject"


def _interp_pvalue(stat: float, crit_ascending: np.ndarray,
                   p_for_crit: np.ndarray) -> tuple[float, str]:
    """Linear interpolation of tail probability with edge clamping.

    ``crit_ascending`` must be ascending; ``p_for_crit`` holds the matching
    tail probabilities (any order of magnitude).
    """
    if stat < crit_ascending[0]:
        p = float(p_for_crit[0])
    elif stat > crit_ascending[-1]:
        p = float(p_for_crit[-1])
    else:
        p = float(np.interp(stat, crit_ascending, p_for_crit))
        return p, "none"
    lo, hi = min(p_for_crit[0], p_for_crit[-1]), max(p_for_crit[0], p_for_crit[-1])
    return p, ("at_lower" if p == lo else "at_upper")


def default_adf_lag(n: int) -> int:
    """Schwert rule: floor(12 * (n/100)^0.25)."""
    return int(np.floor(12.0 * (n / 100.0) ** 0.25))


def default_kpss_lag(n: int) -> int:
    """Short Bartlett bandwidth: floor(4 * (n/100)^0.25)."""
    return int(np.floor(4.0 * (n / 100.0) ** 0.25))


def _ols_tstat(x: np.ndarray, y: np.ndarray, coef_index: int) -> float:
    """t-ratio of one coefficient in an OLS regression of y on x."""
    n, k = x.shape
    beta, _, rank, _ = np.linalg.lstsq(x, y, rcond=None)
    if rank < k:
        raise SingularRegression("design matrix is rank-deficient",
                                 op="stationarity.adf_test")
    resid = y - x @ beta
    dof = n - k
    if dof <= 0:
        raise TooShort("not enough observations for the regression",
                       op="stationarity.adf_test")
    s2 = float(resid @ resid) / dof
    cov = s2 * np.linalg.inv(x.T @ x)
    se = np.sqrt(cov[coef_index, coef_index])
    if se == 0.0:
        raise SingularRegression("zero standard error in the test regression",
                                 op="stationarity.adf_test")
    return float(beta[coef_index] / se)


def adf_test(series: TimeSeries, lag: int | None = None, alpha: float = 0.05,
             regression: str = "trend") -> TestReport:
    """Augmented Dickey-Fuller test (null: unit root).

    Fits dy_t = mu + beta*t + rho*y_{t-1} + sum gamma_i dy_{t-i} + e_t
    (deterministic terms per ``regression``) and reports the t-ratio of
    rho. P-value interpolated in the embedded Dickey-Fuller table, clamped
    to [0.01, 0.99].

    Parameters
    ----------
    lag : int, optional
        Number of augmentation lags; Schwert rule when omitted.
    regression : {"trend", "drift", "none"}
        Deterministic terms. "trend" matches the convention used for the
        reference results this library reproduces.
    """
    if regression not in ADF_REGRESSIONS:
        raise ValueError(f"regression must be one of {ADF_REGRESSIONS}")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    y = series.values
    n = y.size
    if lag is None:
        lag = default_adf_lag(n)
    if lag < 0:
        raise ValueError("lag must be >= 0")
    if n < 3 * (lag + 2):
        raise TooShort(f"need at least {3 * (lag + 2)} observations for lag={lag}",
                       op="stationarity.adf_test")

    dy = np.diff(y)
    rows = dy.size - lag
    lhs = dy[lag:]
    cols = [y[lag:-1]]
    for i in range(1, lag + 1):
        cols.append(dy[lag - i:dy.size - i])
    if regression in ("drift", "trend"):
        cols.insert(0, np.ones(rows))
    if regression == "trend":
        cols.insert(1, np.arange(1.0, rows + 1.0))
    x = np.column_stack(cols)
    coef_index = {"none": 0, "drift": 1, "trend": 2}[regression]
    stat = _ols_tstat(x, lhs, coef_index)

    crit = np.array([
        float(np.interp(1.0 / n,
                        1.0 / _DF_TABLE_N[::-1],
                        _DF_CRIT[regression][::-1, j]))
        for j in range(_DF_TABLE_P.size)
    ])
    p_value, p_clamped = _interp_pvalue(stat, crit, _DF_TABLE_P)
    return TestReport(test_name="ADF", statistic=stat, p_value=p_value,
                      p_clamped=p_clamped, lag=lag,
                      decision=_decision(p_value, alpha), alpha=alpha,
                      detail=f"regression={regression}")


def kpss_test(series: TimeSeries, lag: int | None = None, alpha: float = 0.05,
              null: str = "level") -> TestReport:
    """KPSS test (null: stationarity).

    Statistic is sum(S_t^2)/n^2 divided by a Bartlett-kernel long-run
    variance, with S_t the partial sums of level-regression residuals.
    P-value interpolated in the published table, clamped to [0.01, 0.10].
    """
    if null not in _KPSS_CRIT:
        raise ValueError(f"null must be one of {tuple(_KPSS_CRIT)}")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    y = series.values
    n = y.size
    if lag is None:
        lag = default_kpss_lag(n)
    if lag < 0:
        raise ValueError("lag must be >= 0")
    if n < 3 * (lag + 2):
        raise TooShort(f"need at least {3 * (lag + 2)} observations for lag={lag}",
                       op="stationarity.kpss_test")

    if null == "level":
        resid = y - np.mean(y)
    else:
        t = np.arange(1.0, n + 1.0)
        x = np.column_stack([np.ones(n), t])
        beta, _, _, _ = np.linalg.lstsq(x, y, rcond=None)
        resid = y - x @ beta
    s = np.cumsum(resid)
    numerator = float(s @ s) / n ** 2
    gamma0 = float(resid @ resid) / n
    lrv = gamma0
    for k in range(1, lag + 1):
        gamma_k = float(resid[k:] @ resid[:-k]) / n
        lrv += 2.0 * (1.0 - k / (lag + 1.0)) * gamma_k
    if lrv <= 0.0:
        raise DegenerateVariance("long-run variance is not positive",
                                 op="stationarity.kpss_test")
    stat = numerator / lrv

    p_value, p_clamped = _interp_pvalue(stat, _KPSS_CRIT[null],
                                        _KPSS_TABLE_P)
    return TestReport(test_name="KPSS", statistic=stat, p_value=p_value,
                      p_clamped=p_clamped, lag=lag,
                      decision=_decision(p_value, alpha), alpha=alpha,
                      detail=f"null={null}")
