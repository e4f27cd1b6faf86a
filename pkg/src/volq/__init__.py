"""volq: volatility modeling and forecasting for stationary time series.

Fits GARCH(m, n) and mixture-Gaussian stochastic-volatility models to
return-like series, screens inputs for stationarity (ADF/KPSS), runs the
standardized-residual test battery, and emits one-step-ahead volatility
forecasts with +/-2 standard-prediction-error bands.
"""

__version__ = "0.1.0"

from .diagnostics import (DiagnosticsBattery, jarque_bera, ljung_box,
                          lm_arch, run_battery, shapiro_wilk)
from .garch import (ForecastPath, GarchFit, GarchModel, fit_garch,
                    garch_forecast, garch_loglik, garch_variance_path,
                    standardized_residuals)
from .optimize import (OptimizerConfig, OptimResult, maximize,
                       numerical_gradient, std_errors_from_hessian)
from .series import (HistogramNormal, SummaryStats, TimeSeries,
                     histogram_with_normal, log_returns, log_squared,
                     summary_stats)
from .simulate import (Ar1Params, GENERATOR_ID, RandomWalkParams, SimResult,
                       SimSpec, WhiteNoiseParams, simulate)
from .stationarity import TestReport, adf_test, kpss_test
from .sv import (FilterState, SvFit, SvParams, fit_sv, simulate_sv,
                 sv_filter, sv_predict)

__all__ = [
    "__version__",
    "Ar1Params", "DiagnosticsBattery", "FilterState", "ForecastPath",
    "GENERATOR_ID", "GarchFit", "GarchModel", "HistogramNormal",
    "OptimResult", "OptimizerConfig", "RandomWalkParams", "SimResult",
    "SimSpec", "SummaryStats", "SvFit", "SvParams", "TestReport",
    "TimeSeries", "WhiteNoiseParams",
    "adf_test", "fit_garch", "fit_sv", "garch_forecast", "garch_loglik",
    "garch_variance_path", "histogram_with_normal", "jarque_bera",
    "kpss_test", "ljung_box", "lm_arch", "log_returns", "log_squared",
    "maximize", "numerical_gradient", "run_battery", "shapiro_wilk",
    "simulate", "simulate_sv", "standardized_residuals",
    "std_errors_from_hessian", "summary_stats", "sv_filter", "sv_predict",
]
