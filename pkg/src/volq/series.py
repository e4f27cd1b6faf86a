"""Core time-series container, transforms, and summary statistics.

All operations are pure: they never mutate their inputs, and the arrays
stored on :class:`TimeSeries` are marked read-only, so values are safe to
share across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateVariance, NonPositiveValue, TooShort

#: Default guard for ln(y^2) at exact zeros; keeps the transform total.
LOG_SQUARED_FLOOR = 1e-300


def _readonly(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Ordered real-valued observations with optional timestamps.

    Parameters
    ----------
    values : array_like
        Finite observations; at least one value.
    timestamps : array_like, optional
        Strictly increasing time points, same length as ``values``.
        Carried through transforms but never used in estimation (series
        are treated as equally spaced).
    label : str
        Free-text identifier used in reports and figures.
    """

    values: np.ndarray
    timestamps: np.ndarray | None = None
    label: str = ""

    def __post_init__(self):
        values = _readonly(self.values)
        if values.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if values.size == 0:
            raise ValueError("values must be non-empty")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite (no NaN or infinity)")
        object.__setattr__(self, "values", values)
        if self.timestamps is not None:
            ts = _readonly(self.timestamps)
            if ts.shape != values.shape:
                raise ValueError("timestamps must match values in length")
            if ts.size > 1 and not np.all(np.diff(ts) > 0):
                raise ValueError("timestamps must be strictly increasing")
            object.__setattr__(self, "timestamps", ts)

    def __len__(self) -> int:
        return self.values.size

    def with_values(self, values, label: str | None = None,
                    timestamps: np.ndarray | None = None) -> "TimeSeries":
        """New series with the given values, keeping label unless overridden."""
        return TimeSeries(values, timestamps=timestamps,
                          label=self.label if label is None else label)


@dataclass(frozen=True)
class SummaryStats:
    """Population moments of a series (divide-by-n convention)."""

    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    n: int


@dataclass(frozen=True)
class HistogramNormal:
    """Histogram of a series with a fitted Normal density for overlay plots."""

    bin_edges: np.ndarray
    counts: np.ndarray
    midpoints: np.ndarray
    density: np.ndarray
    normal_pdf: np.ndarray
    mean: float
    std: float

    def rows(self) -> list[tuple[float, int, float, float]]:
        """Plot-ready rows (midpoint, count, empirical density, normal pdf)."""
        return [
            (float(m), int(c), float(d), float(p))
            for m, c, d, p in zip(self.midpoints, self.counts,
                                  self.density, self.normal_pdf)
        ]


def log_returns(series: TimeSeries) -> TimeSeries:
    """Log returns ln(p[i+1]/p[i]) of a strictly positive price series.

    Output is one observation shorter than the input; the label gains a
    ``-logret`` suffix.
    """
    if len(series) < 2:
        raise TooShort("need at least 2 prices", op="series.log_returns")
    prices = series.values
    if np.any(prices <= 0):
        bad = int(np.argmax(prices <= 0))
        raise NonPositiveValue(
            f"price at index {bad} is {prices[bad]!r}; all prices must be > 0",
            op="series.log_returns")
    values = np.diff(np.log(prices))
    ts = series.timestamps[1:] if series.timestamps is not None else None
    return TimeSeries(values, timestamps=ts, label=series.label + "-logret")


def log_squared(series: TimeSeries, floor: float = LOG_SQUARED_FLOOR) -> TimeSeries:
    """ln(max(y^2, floor)); the floor guards exact zeros so the map is total."""
    if floor <= 0:
        raise NonPositiveValue("floor must be > 0", op="series.log_squared")
    values = np.log(np.maximum(series.values ** 2, floor))
    return TimeSeries(values, timestamps=series.timestamps,
                      label=series.label + "-logsq")


def summary_stats(series: TimeSeries) -> SummaryStats:
    """Population mean/variance/skewness/excess kurtosis.

    Moments accumulate through correctly-rounded summation (math.fsum), so
    duplicating a sample leaves mean and variance bit-identical. A
    zero-variance series gets skewness and excess kurtosis of 0.0 rather
    than NaN so reports stay serializable.
    """
    if len(series) < 2:
        raise TooShort("need at least 2 observations", op="series.summary_stats")
    x = series.values
    n = x.size
    mean = math.fsum(x) / n
    centered = x - mean
    m2 = math.fsum(centered ** 2) / n
    if m2 == 0.0:
        return SummaryStats(mean=mean, variance=0.0, skewness=0.0,
                            excess_kurtosis=0.0, n=n)
    m3 = math.fsum(centered ** 3) / n
    m4 = math.fsum(centered ** 4) / n
    return SummaryStats(mean=mean,
                        variance=m2,
                        skewness=m3 / m2 ** 1.5,
                        excess_kurtosis=m4 / m2 ** 2 - 3.0,
                        n=n)


def histogram_with_normal(series: TimeSeries, bins: int) -> HistogramNormal:
    """Histogram plus the Normal pdf with the series' mean and sd.

    The pdf is evaluated at bin midpoints; ``density`` is the empirical
    density (count / (n * bin width)) so the two curves are comparable.
    """
    if bins < 2:
        raise ValueError("bins must be >= 2")
    if len(series) < 2:
        raise TooShort("need at least 2 observations",
                       op="series.histogram_with_normal")
    stats = summary_stats(series)
    if stats.variance == 0.0:
        raise DegenerateVariance("series is constant; no density to fit",
                                 op="series.histogram_with_normal")
    counts, edges = np.histogram(series.values, bins=bins)
    widths = np.diff(edges)
    midpoints = 0.5 * (edges[:-1] + edges[1:])
    density = counts / (stats.n * widths)
    sd = np.sqrt(stats.variance)
    z = (midpoints - stats.mean) / sd
    pdf = np.exp(-0.5 * z ** 2) / (sd * np.sqrt(2.0 * np.pi))
    return HistogramNormal(bin_edges=edges, counts=counts, midpoints=midpoints,
                           density=density, normal_pdf=pdf,
                           mean=stats.mean, std=float(sd))
