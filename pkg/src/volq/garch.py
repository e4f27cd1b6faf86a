"""GARCH(m, n) conditional-variance modeling.

Variance recursion, Gaussian maximum likelihood, one-step-ahead variance
prediction with +/-2 standard-prediction-error bands, and standardized
residuals for the diagnostics battery.

Pre-sample values of both y^2 and sigma^2 are seeded with the sample
variance (backcast convention), which makes the recursion total from the
first observation. Positivity of the parameters is enforced by optimizing
their logarithms, so the likelihood stays smooth; the stationarity
constraint sum(a) + sum(b) < 1 is reported as a flag, never imposed.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from numba import njit
from scipy.stats import norm

from .errors import (DegenerateVariance, InvalidFit, InvalidParams,
                     NumericalOverflow, TooShort)
from .optimize import (OptimizerConfig, maximize, std_errors_from_hessian)
from .series import TimeSeries

logger = logging.getLogger(__name__)

#: Relative variance floor inside the likelihood (times sample variance).
VARIANCE_FLOOR_RATIO = 1e-12
#: Documented minimum series length for a meaningful fit.
MIN_FIT_LENGTH = 50

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class GarchModel:
    """GARCH(m, n) parameters: sigma2_t = a0 + sum a_j y2_{t-j} + sum b_j sigma2_{t-j}.

    ``a`` holds the m >= 1 coefficients on lagged squared observations,
    ``b`` the n >= 0 coefficients on lagged variances. a0 must be strictly
    positive and every coefficient non-negative so the variance stays
    positive for any input.
    """

    a0: float
    a: tuple[float, ...]
    b: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if len(self.a) < 1:
            raise InvalidParams("need at least one ARCH coefficient (m >= 1)",
                                op="garch.GarchModel")
        if not self.a0 > 0:
            raise InvalidParams("a0 must be > 0", op="garch.GarchModel")
        if any(v < 0 for v in self.a) or any(v < 0 for v in self.b):
            raise InvalidParams("all coefficients must be >= 0",
                                op="garch.GarchModel")

    @property
    def order_m(self) -> int:
        return len(self.a)

    @property
    def order_n(self) -> int:
        return len(self.b)

    @property
    def persistence(self) -> float:
        """sum(a) + sum(b); < 1 indicates a stationary solution."""
        return float(sum(self.a) + sum(self.b))

    @property
    def is_stationary(self) -> bool:
        return self.persistence < 1.0

    def param_names(self) -> list[str]:
        return (["a0"] + [f"a{j}" for j in range(1, self.order_m + 1)]
                + [f"b{j}" for j in range(1, self.order_n + 1)])

    def param_vector(self) -> np.ndarray:
        return np.array([self.a0, *self.a, *self.b])

    @classmethod
    def from_vector(cls, theta: np.ndarray, m: int, n: int) -> "GarchModel":
        theta = np.asarray(theta, dtype=float)
        return cls(a0=float(theta[0]), a=tuple(theta[1:1 + m]),
                   b=tuple(theta[1 + m:1 + m + n]))


@dataclass(frozen=True)
class ForecastPath:
    """Prediction center with a +/- half_width band.

    ``scale`` is "variance" for GARCH (center is predicted variance, band
    half-width 2*sigma-hat around a zero-centered return forecast) or
    "log_variance" for the stochastic-volatility engine (center is
    predicted log-volatility, half-width twice the prediction error sd).
    """

    center: np.ndarray
    half_width: np.ndarray
    scale: str

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float)
        half = np.asarray(self.half_width, dtype=float)
        if center.shape != half.shape:
            raise InvalidParams("center and half_width must align",
                                op="garch.ForecastPath")
        if np.any(half < 0):
            raise InvalidParams("half_width must be non-negative",
                                op="garch.ForecastPath")
        if self.scale not in ("variance", "log_variance"):
            raise InvalidParams("scale must be variance or log_variance",
                                op="garch.ForecastPath")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "half_width", half)

    def lower(self) -> np.ndarray:
        return self.center - self.half_width

    def upper(self) -> np.ndarray:
        return self.center + self.half_width


@dataclass(frozen=True)
class GarchFit:
    """Fitted GARCH model with inference columns and the variance path."""

    model: GarchModel
    std_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    variance_path: np.ndarray
    loglik: float
    converged: bool
    iterations: int
    se_singular: bool = False


@njit(cache=True)
def _variance_kernel(y2, a0, a, b, presample):  # pragma: no cover - jitted
    n = y2.shape[0]
    m = a.shape[0]
    q = b.shape[0]
    out = np.empty(n)
    for t in range(n):
        s = a0
        for j in range(m):
            k = t - 1 - j
            s += a[j] * (y2[k] if k >= 0 else presample)
        for j in range(q):
            k = t - 1 - j
            s += b[j] * (out[k] if k >= 0 else presample)
        out[t] = s
    return out


def _sample_variance(values: np.ndarray) -> float:
    mean = float(np.mean(values))
    return float(np.mean((values - mean) ** 2))


def garch_variance_path(model: GarchModel, series: TimeSeries,
                        init_variance: float | None = None) -> np.ndarray:
    """Conditional variance recursion over the whole series.

    Pre-sample y^2 and sigma^2 are seeded with ``init_variance`` (sample
    variance of the series when omitted), which makes the recursion total
    for any series length. Output has one strictly positive sigma^2 per
    observation.
    """
    y = series.values
    presample = _sample_variance(y) if init_variance is None else float(init_variance)
    if presample < 0:
        raise InvalidParams("init_variance must be >= 0",
                            op="garch.garch_variance_path")
    return _variance_kernel(y ** 2, model.a0, np.array(model.a),
                            np.array(model.b), presample)


def garch_loglik(model: GarchModel, series: TimeSeries,
                 init_variance: float | None = None) -> float:
    """Gaussian log-likelihood: sum of N(0, sigma2_t) log-densities.

    A floor of 1e-12 times the sample variance is applied to sigma2_t so
    line searches never hit -inf.
    """
    sig2 = garch_variance_path(model, series, init_variance)
    y = series.values
    floor = max(_sample_variance(y) * VARIANCE_FLOOR_RATIO, 1e-300)
    sig2 = np.maximum(sig2, floor)
    ll = -0.5 * float(np.sum(_LOG_2PI + np.log(sig2) + y ** 2 / sig2))
    if not math.isfinite(ll):
        raise NumericalOverflow("log-likelihood is not finite",
                                op="garch.garch_loglik")
    return ll


def _default_init(series_variance: float, m: int, n: int) -> np.ndarray:
    arch_mass = 0.10
    garch_mass = 0.80 if n > 0 else 0.0
    a0 = max(series_variance, 1e-6) * (1.0 - arch_mass - garch_mass)
    a = np.full(m, arch_mass / m)
    b = np.full(n, garch_mass / n) if n > 0 else np.empty(0)
    return np.concatenate([[a0], a, b])


def fit_garch(series: TimeSeries, m: int = 1, n: int = 1,
              config: OptimizerConfig | None = None,
              init: GarchModel | None = None) -> GarchFit:
    """Maximum-likelihood GARCH(m, n) fit.

    Standard errors come from the inverse numerical Hessian at the optimum
    (delta method through the log transform); p-values are two-sided
    Normal. On non-convergence the best point found is returned with
    ``converged=False`` rather than raising.
    """
    if m < 1:
        raise InvalidParams("m must be >= 1", op="garch.fit_garch")
    if n < 0:
        raise InvalidParams("n must be >= 0", op="garch.fit_garch")
    if len(series) < MIN_FIT_LENGTH:
        raise TooShort(f"need at least {MIN_FIT_LENGTH} observations",
                       op="garch.fit_garch")
    if _sample_variance(series.values) == 0.0:
        raise DegenerateVariance("constant series: variance path collapses, "
                                 "the likelihood has no interior maximum",
                                 op="garch.fit_garch")

    y = series.values
    y2 = y ** 2
    n_obs = y.size
    sample_var = _sample_variance(y)
    presample = sample_var
    floor = max(sample_var * VARIANCE_FLOOR_RATIO, 1e-300)
    dim = 1 + m + n

    # Optimize the mean log-likelihood: scale-free Newton steps, and the
    # line search can resolve improvements near the optimum.
    def objective(theta: np.ndarray) -> float:
        sig2 = _variance_kernel(y2, theta[0], theta[1:1 + m],
                                theta[1 + m:dim], presample)
        sig2 = np.maximum(sig2, floor)
        return -0.5 * float(np.mean(_LOG_2PI + np.log(sig2) + y2 / sig2))

    theta0 = init.param_vector() if init is not None else _default_init(sample_var, m, n)
    theta0 = np.maximum(theta0, 1e-12)
    base = config or OptimizerConfig()
    opt_config = replace(base, transforms=("log_positive",) * dim)
    result = maximize(objective, theta0, opt_config)

    model = GarchModel.from_vector(result.argmax, m, n)
    se, singular = std_errors_from_hessian(result.hessian * n_obs,
                                           opt_config.transforms,
                                           result.argmax)
    estimates = model.param_vector()
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = np.where(np.isfinite(se) & (se > 0), estimates / se, 0.0)
    p_values = 2.0 * norm.sf(np.abs(t_stats))
    if not result.converged:
        logger.warning("fit_garch stopped without convergence (%s) after "
                       "%d iterations", result.stop_reason, result.iterations)
    return GarchFit(model=model,
                    std_errors=se,
                    t_stats=t_stats,
                    p_values=p_values,
                    variance_path=garch_variance_path(model, series),
                    loglik=result.value * n_obs,
                    converged=result.converged,
                    iterations=result.iterations,
                    se_singular=singular)


def garch_forecast(fit: GarchFit, series: TimeSeries, horizon: int = 1,
                   allow_unconverged: bool = False) -> ForecastPath:
    """One-step-ahead predicted variance with a +/-2 sigma-hat band.

    Rolls the fitted recursion through every in-sample point and then
    ``horizon`` steps past the end, substituting predicted variance for
    unavailable future y^2. ``half_width`` is twice the standard prediction
    error of the one-step return (the return forecast is centered at 0).
    """
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if not fit.converged and not allow_unconverged:
        raise InvalidFit("fit did not converge; pass allow_unconverged=True "
                         "to forecast anyway", op="garch.garch_forecast")
    model = fit.model
    n_obs = len(series)
    sig2 = list(garch_variance_path(model, series))
    y2 = list(series.values ** 2)
    presample = _sample_variance(series.values)
    for k in range(horizon):
        t = n_obs + k
        s = model.a0
        for j, aj in enumerate(model.a, start=1):
            idx = t - j
            if idx >= n_obs:
                s += aj * sig2[idx]
            elif idx >= 0:
                s += aj * y2[idx]
            else:
                s += aj * presample
        for j, bj in enumerate(model.b, start=1):
            idx = t - j
            s += bj * (sig2[idx] if idx >= 0 else presample)
        sig2.append(s)
    center = np.array(sig2)
    return ForecastPath(center=center, half_width=2.0 * np.sqrt(center),
                        scale="variance")


def standardized_residuals(fit: GarchFit, series: TimeSeries,
                           allow_unconverged: bool = False) -> TimeSeries:
    """R_t = y_t / sigma-hat_t, the input for the residual test battery."""
    if not fit.converged and not allow_unconverged:
        raise InvalidFit("fit did not converge; pass allow_unconverged=True",
                         op="garch.standardized_residuals")
    sig2 = garch_variance_path(fit.model, series)
    resid = series.values / np.sqrt(sig2)
    return TimeSeries(resid, timestamps=series.timestamps,
                      label=series.label + "-stdres")
