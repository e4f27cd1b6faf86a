"""Figure rendering for the CLI report path.

Renders the two standard views to image files next to the delimited
output: the observed series wrapped in its +/-2 standard-prediction-error
band, and a histogram with the fitted Normal density. Uses the Agg canvas
directly so no display or global pyplot state is involved.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .garch import ForecastPath
from .series import HistogramNormal, TimeSeries


def _new_axes(title: str):
    fig = Figure(figsize=(10.0, 3.2), dpi=120)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    ax.set_title(title, fontsize=10)
    ax.grid(True, alpha=0.25)
    return fig, ax


def render_forecast_figure(forecast: ForecastPath, series: TimeSeries,
                           path: str | Path, title: str | None = None) -> Path:
    """Forecast band figure.

    On the variance scale the observed series is drawn with the +/-2
    sigma-hat envelope as dashed lines around zero; on the log-variance
    scale the predicted log-volatility is drawn with its band. The band
    extends past the data when the forecast has extra horizon steps.
    """
    path = Path(path)
    t_band = np.arange(forecast.center.size)
    t_obs = np.arange(len(series))
    if forecast.scale == "variance":
        fig, ax = _new_axes(title or f"Predicted volatility band: {series.label}")
        ax.plot(t_obs, series.values, lw=0.6, color="0.25", label="observed")
        ax.plot(t_band, forecast.half_width, "b--", lw=0.9,
                label="+/-2 prediction SE")
        ax.plot(t_band, -forecast.half_width, "b--", lw=0.9)
    else:
        fig, ax = _new_axes(title or f"Predicted log-volatility: {series.label}")
        ax.plot(t_band, forecast.center, lw=0.9, color="0.2",
                label="predicted log-volatility")
        ax.plot(t_band, forecast.upper(), "b--", lw=0.8,
                label="+/-2 prediction SE")
        ax.plot(t_band, forecast.lower(), "b--", lw=0.8)
    if forecast.center.size > len(series):
        ax.axvline(len(series) - 0.5, color="r", lw=0.7, alpha=0.6)
    ax.set_xlabel("t")
    ax.legend(loc="upper right", fontsize=8)
    fig.savefig(path, bbox_inches="tight")
    return path


def render_histogram_figure(hist: HistogramNormal, path: str | Path,
                            title: str = "Histogram with fitted Normal density",
                            ) -> Path:
    """Histogram bars with the Normal pdf overlay, in density units."""
    path = Path(path)
    fig, ax = _new_axes(title)
    widths = np.diff(hist.bin_edges)
    ax.bar(hist.midpoints, hist.density, width=widths, color="0.7",
           edgecolor="0.4", label="empirical density")
    ax.plot(hist.midpoints, hist.normal_pdf, "r-", lw=1.2,
            label="Normal density")
    ax.set_xlabel("value")
    ax.set_ylabel("density")
    ax.legend(loc="upper right", fontsize=8)
    fig.savefig(path, bbox_inches="tight")
    return path
