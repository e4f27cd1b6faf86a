"""Stochastic volatility with two-component Gaussian-mixture observation noise.

The observation model is g_t = lam + v_t + gamma_t on log-squared data,
with latent log-volatility v_t = alpha0 + alpha1 * v_{t-1} + w_t and
gamma_t drawn from N(0, sigma0^2) with probability 1 - p1 or
N(phi1, sigma1^2) with probability p1. Filtering runs one Kalman update
per mixture component and blends the state corrections by the posterior
component probabilities; the likelihood is the sum of log prior-weighted
component predictive densities, accumulated in log space.

The filter starts from v = 0 with the stationary state variance
sigma_w^2 / (1 - alpha1^2) when |alpha1| < 1 (sigma_w^2 otherwise). Both
component gains use the state persistence alpha1, which is what makes the
filter collapse exactly to a single-Gaussian Kalman filter when the two
components coincide. A negative variance from pathological parameters is
clamped to zero and counted, never propagated.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from .errors import InvalidFit, InvalidParams, TooShort
from .garch import ForecastPath
from .optimize import OptimizerConfig, maximize, std_errors_from_hessian
from .series import TimeSeries, log_squared

logger = logging.getLogger(__name__)

#: Documented minimum series length for a meaningful fit.
MIN_FIT_LENGTH = 100

_LOG_2PI = math.log(2.0 * math.pi)

#: Report row order for fitted parameters.
PARAM_NAMES = ("alpha0", "alpha1", "sigma_w", "lambda", "sigma0", "phi1",
               "sigma1")


@dataclass(frozen=True)
class SvParams:
    """Parameters of the mixture-noise stochastic-volatility model.

    ``lam`` is the mean level of the log-squared observations. ``p1`` is
    the probability of the offset mixture component (fixed at 0.5 during
    estimation unless explicitly released). |alpha1| < 1 is the
    stationarity condition, reported as a flag rather than enforced.
    """

    alpha0: float
    alpha1: float
    sigma_w: float
    lam: float
    sigma0: float
    phi1: float
    sigma1: float
    p1: float = 0.5

    def __post_init__(self):
        if self.sigma_w < 0:
            raise InvalidParams("sigma_w must be >= 0", op="sv.SvParams")
        if self.sigma0 <= 0 or self.sigma1 <= 0:
            raise InvalidParams("sigma0 and sigma1 must be > 0",
                                op="sv.SvParams")
        if not 0.0 < self.p1 < 1.0:
            raise InvalidParams("p1 must be in (0, 1)", op="sv.SvParams")

    @property
    def is_stationary(self) -> bool:
        return abs(self.alpha1) < 1.0

    def param_vector(self) -> np.ndarray:
        return np.array([self.alpha0, self.alpha1, self.sigma_w, self.lam,
                         self.sigma0, self.phi1, self.sigma1])

    @classmethod
    def from_vector(cls, theta: np.ndarray, p1: float = 0.5) -> "SvParams":
        theta = np.asarray(theta, dtype=float)
        return cls(alpha0=float(theta[0]), alpha1=float(theta[1]),
                   sigma_w=float(theta[2]), lam=float(theta[3]),
                   sigma0=float(theta[4]), phi1=float(theta[5]),
                   sigma1=float(theta[6]), p1=p1)


def default_init(g_mean: float) -> SvParams:
    """Standard starting point: persistence 0.96, offset component at -4."""
    return SvParams(alpha0=0.0, alpha1=0.96, sigma_w=0.3, lam=float(g_mean),
                    sigma0=1.0, phi1=-4.0, sigma1=3.0, p1=0.5)


@dataclass(frozen=True)
class FilterState:
    """One filtering step: prediction, per-component update quantities."""

    v_pred: float
    u_pred: float
    innovations: tuple[float, float]
    innovation_vars: tuple[float, float]
    gains: tuple[float, float]
    probs: tuple[float, float]


@dataclass(frozen=True)
class SvFit:
    """Fitted SV model: parameters, inference, filter path, predictions."""

    params: SvParams
    std_errors: np.ndarray
    loglik: float
    filter_path: tuple[FilterState, ...]
    predicted_logvol: ForecastPath
    converged: bool
    iterations: int
    se_singular: bool = False
    clamped_steps: int = 0


@njit(cache=True)
def _filter_kernel(g, alpha0, alpha1, sigma_w, lam, sigma0, phi1, sigma1,
                   p1):  # pragma: no cover - jitted
    n = g.shape[0]
    v_pred = np.empty(n)
    u_pred = np.empty(n)
    eta = np.empty((n, 2))
    ivar = np.empty((n, 2))
    gain = np.empty((n, 2))
    prob = np.empty((n, 2))
    p0 = 1.0 - p1
    log_p0 = math.log(p0)
    log_p1 = math.log(p1)
    var_w = sigma_w * sigma_w
    var0 = sigma0 * sigma0
    var1 = sigma1 * sigma1
    if abs(alpha1) < 1.0:
        u = var_w / (1.0 - alpha1 * alpha1)
    else:
        u = var_w
    v = 0.0
    loglik = 0.0
    clamped = 0
    log_2pi = 1.8378770664093453
    for t in range(n):
        v_pred[t] = v
        u_pred[t] = u
        e0 = g[t] - lam - v
        e1 = e0 - phi1
        s0 = u + var0
        s1 = u + var1
        k0 = alpha1 * u / s0
        k1 = alpha1 * u / s1
        l0 = log_p0 - 0.5 * (log_2pi + math.log(s0) + e0 * e0 / s0)
        l1 = log_p1 - 0.5 * (log_2pi + math.log(s1) + e1 * e1 / s1)
        hi = l0 if l0 > l1 else l1
        lse = hi + math.log(math.exp(l0 - hi) + math.exp(l1 - hi))
        loglik += lse
        w1 = math.exp(l1 - lse)
        w0 = 1.0 - w1
        eta[t, 0] = e0
        eta[t, 1] = e1
        ivar[t, 0] = s0
        ivar[t, 1] = s1
        gain[t, 0] = k0
        gain[t, 1] = k1
        prob[t, 0] = w0
        prob[t, 1] = w1
        v = alpha0 + alpha1 * v + w0 * k0 * e0 + w1 * k1 * e1
        u = alpha1 * alpha1 * u + var_w - (w0 * k0 * k0 * s0
                                           + w1 * k1 * k1 * s1)
        if u < 0.0:
            u = 0.0
            clamped += 1
    return v_pred, u_pred, eta, ivar, gain, prob, loglik, clamped


def _kernel_args(params: SvParams) -> tuple:
    return (params.alpha0, params.alpha1, params.sigma_w, params.lam,
            params.sigma0, params.phi1, params.sigma1, params.p1)


def sv_loglik(params: SvParams, g: np.ndarray) -> float:
    """Mixture filtering log-likelihood of log-squared observations."""
    out = _filter_kernel(np.asarray(g, dtype=float), *_kernel_args(params))
    return float(out[6])


def _run_filter(params: SvParams, g_values: np.ndarray,
                ) -> tuple[tuple[FilterState, ...], float, int]:
    v_pred, u_pred, eta, ivar, gain, prob, loglik, clamped = _filter_kernel(
        np.asarray(g_values, dtype=float), *_kernel_args(params))
    if clamped:
        logger.warning("state variance clamped to 0 at %d of %d steps",
                       clamped, g_values.size)
    path = tuple(
        FilterState(v_pred=float(v_pred[t]), u_pred=float(u_pred[t]),
                    innovations=(float(eta[t, 0]), float(eta[t, 1])),
                    innovation_vars=(float(ivar[t, 0]), float(ivar[t, 1])),
                    gains=(float(gain[t, 0]), float(gain[t, 1])),
                    probs=(float(prob[t, 0]), float(prob[t, 1])))
        for t in range(g_values.size))
    return path, float(loglik), int(clamped)


def sv_filter(params: SvParams,
              g: TimeSeries) -> tuple[tuple[FilterState, ...], float]:
    """Run the switching Kalman filter on log-squared observations.

    Returns the per-step filter states and the accumulated
    log-likelihood. Posterior component probabilities are normalized at
    every step; the predicted state variance is clamped at zero (with a
    warning) if parameters are pathological.
    """
    path, loglik, _ = _run_filter(params, g.values)
    return path, loglik


_TRANSFORMS = ("free", "free", "log_positive", "free", "log_positive",
               "free", "log_positive")


def fit_sv(series: TimeSeries, init: SvParams | None = None,
           config: OptimizerConfig | None = None,
           estimate_mixing: bool = False) -> SvFit:
    """Fit the SV model to raw observations by expected-likelihood MLE.

    The series is log-squared internally. The default starting point is
    :func:`default_init` with ``lam`` set to the mean of the transformed
    data. ``p1`` stays fixed at its initial value unless
    ``estimate_mixing=True`` adds it (logit-transformed) to the search.
    """
    if len(series) < MIN_FIT_LENGTH:
        raise TooShort(f"need at least {MIN_FIT_LENGTH} observations",
                       op="sv.fit_sv")
    g = log_squared(series).values
    if init is None:
        init = default_init(float(np.mean(g)))
    p1_fixed = init.p1

    n_obs = g.size
    # Mean log-likelihood keeps the line search resolvable on long series.
    if estimate_mixing:
        transforms = _TRANSFORMS + ("logit_unit",)
        theta0 = np.append(init.param_vector(), init.p1)

        def objective(theta: np.ndarray) -> float:
            return float(_filter_kernel(g, *theta)[6]) / n_obs
    else:
        transforms = _TRANSFORMS
        theta0 = init.param_vector()

        def objective(theta: np.ndarray) -> float:
            return float(_filter_kernel(g, *theta, p1_fixed)[6]) / n_obs

    theta0 = theta0.copy()
    theta0[2] = max(theta0[2], 1e-8)  # sigma_w enters through a log transform
    base = config or OptimizerConfig()
    opt_config = replace(base, transforms=transforms)
    result = maximize(objective, theta0, opt_config)

    se, singular = std_errors_from_hessian(result.hessian * n_obs,
                                           transforms, result.argmax)
    p1_hat = float(result.argmax[7]) if estimate_mixing else p1_fixed
    params = SvParams.from_vector(result.argmax[:7], p1=p1_hat)
    path, loglik, clamped = _run_filter(params, g)
    v_pred = np.array([s.v_pred for s in path])
    u_pred = np.array([s.u_pred for s in path])
    predicted = ForecastPath(center=v_pred,
                             half_width=2.0 * np.sqrt(u_pred),
                             scale="log_variance")
    if not result.converged:
        logger.warning("fit_sv stopped without convergence (%s) after %d "
                       "iterations", result.stop_reason, result.iterations)
    return SvFit(params=params, std_errors=se, loglik=loglik,
                 filter_path=path, predicted_logvol=predicted,
                 converged=result.converged, iterations=result.iterations,
                 se_singular=singular, clamped_steps=clamped)


def sv_predict(fit: SvFit, horizon: int = 1,
               allow_unconverged: bool = False) -> ForecastPath:
    """One-step-ahead predicted log-volatility with a +/-2 sqrt(U) band.

    The in-sample part is the filter's prediction sequence; the
    ``horizon`` extra steps extrapolate with v <- alpha0 + alpha1 * v and
    U <- alpha1^2 * U + sigma_w^2 (no data updates).
    """
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if not fit.converged and not allow_unconverged:
        raise InvalidFit("fit did not converge; pass allow_unconverged=True",
                         op="sv.sv_predict")
    params = fit.params
    v_pred = [s.v_pred for s in fit.filter_path]
    u_pred = [s.u_pred for s in fit.filter_path]
    last = fit.filter_path[-1]
    # Re-run the final update to step past the last observation.
    w0, w1 = last.probs
    k0, k1 = last.gains
    e0, e1 = last.innovations
    s0, s1 = last.innovation_vars
    v = params.alpha0 + params.alpha1 * last.v_pred + w0 * k0 * e0 + w1 * k1 * e1
    u = (params.alpha1 ** 2 * last.u_pred + params.sigma_w ** 2
         - (w0 * k0 ** 2 * s0 + w1 * k1 ** 2 * s1))
    u = max(u, 0.0)
    for _ in range(horizon):
        v_pred.append(v)
        u_pred.append(u)
        v = params.alpha0 + params.alpha1 * v
        u = params.alpha1 ** 2 * u + params.sigma_w ** 2
    return ForecastPath(center=np.array(v_pred),
                        half_width=2.0 * np.sqrt(np.array(u_pred)),
                        scale="log_variance")


def simulate_sv(params: SvParams, n: int, seed: int,
                burn_in: int = 500) -> tuple[TimeSeries, TimeSeries]:
    """Generate observations and the true latent log-volatility path.

    Draw order (fixed for reproducibility): state noise, component-0
    deviates, component-1 deviates, component picks, observation signs.
    Observations are +/- exp(g_t / 2) with random signs, so log-squaring
    them recovers g_t exactly. Deterministic given the seed.
    """
    if n < 1:
        raise InvalidParams("n must be >= 1", op="sv.simulate_sv")
    if burn_in < 0:
        raise InvalidParams("burn_in must be >= 0", op="sv.simulate_sv")
    rng = np.random.default_rng(seed)
    total = burn_in + n
    w = params.sigma_w * rng.standard_normal(total)
    z0 = params.sigma0 * rng.standard_normal(total)
    z1 = params.phi1 + params.sigma1 * rng.standard_normal(total)
    pick = rng.random(total) < params.p1
    signs = np.where(rng.random(total) < 0.5, 1.0, -1.0)

    v = np.empty(total)
    prev = (params.alpha0 / (1.0 - params.alpha1)
            if params.is_stationary else 0.0)
    for t in range(total):
        prev = params.alpha0 + params.alpha1 * prev + w[t]
        v[t] = prev
    gamma = np.where(pick, z1, z0)
    g = params.lam + v + gamma
    y = signs * np.exp(0.5 * g)
    label = f"sv-sim-seed{seed}"
    return (TimeSeries(y[burn_in:], label=label),
            TimeSeries(v[burn_in:], label=label + "-logvol"))
