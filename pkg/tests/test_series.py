import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from volq import (TimeSeries, histogram_with_normal, log_returns,
                  log_squared, summary_stats)
from volq.errors import DegenerateVariance, NonPositiveValue, TooShort


class TestTimeSeries:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            TimeSeries([])

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            TimeSeries([1.0, np.nan])
        with pytest.raises(ValueError):
            TimeSeries([1.0, np.inf])

    def test_timestamps_must_align_and_increase(self):
        with pytest.raises(ValueError):
            TimeSeries([1.0, 2.0], timestamps=[0.0])
        with pytest.raises(ValueError):
            TimeSeries([1.0, 2.0], timestamps=[1.0, 1.0])
        ts = TimeSeries([1.0, 2.0], timestamps=[0.0, 1.0], label="ok")
        assert len(ts) == 2

    def test_values_are_read_only(self):
        ts = TimeSeries([1.0, 2.0])
        with pytest.raises(ValueError):
            ts.values[0] = 5.0


class TestLogReturns:
    def test_constant_price_gives_zero_returns(self):
        out = log_returns(TimeSeries([1.0, 1.0, 1.0]))
        assert_allclose(out.values, [0.0, 0.0])

    def test_geometric_growth(self):
        out = log_returns(TimeSeries([1.0, math.e, math.e ** 2]))
        assert_allclose(out.values, [1.0, 1.0], rtol=1e-14)

    def test_hand_computed_values(self):
        out = log_returns(TimeSeries([100.0, 101.0, 99.5]))
        assert_allclose(out.values,
                        [math.log(1.01), math.log(99.5 / 101.0)], rtol=1e-12)

    def test_label_suffix(self):
        out = log_returns(TimeSeries([1.0, 2.0], label="prices"))
        assert out.label == "prices-logret"

    def test_errors(self):
        with pytest.raises(TooShort):
            log_returns(TimeSeries([1.0]))
        with pytest.raises(NonPositiveValue):
            log_returns(TimeSeries([1.0, 0.0]))
        with pytest.raises(NonPositiveValue):
            log_returns(TimeSeries([1.0, -2.0]))

    def test_round_trip_with_cumulative_exponential(self):
        rng = np.random.default_rng(5)
        returns = rng.standard_normal(300) * 0.05
        prices = np.exp(np.cumsum(returns))
        recovered = log_returns(TimeSeries(np.concatenate([[1.0], prices])))
        assert np.max(np.abs(recovered.values - returns)) < 1e-12


class TestLogSquared:
    def test_unit_values(self):
        out = log_squared(TimeSeries([1.0, -1.0]))
        assert_allclose(out.values, [0.0, 0.0])

    def test_floor_engages_at_zero(self):
        out = log_squared(TimeSeries([0.0]), floor=1e-10)
        assert_allclose(out.values, [math.log(1e-10)])

    def test_direct_evaluation(self):
        out = log_squared(TimeSeries([2.0, 0.5]))
        assert_allclose(out.values, [math.log(4.0), math.log(0.25)], rtol=1e-14)

    def test_sign_flip_invariance_exact(self):
        rng = np.random.default_rng(9)
        x = rng.standard_normal(100)
        a = log_squared(TimeSeries(x)).values
        b = log_squared(TimeSeries(-x)).values
        assert np.array_equal(a, b)

    def test_floor_must_be_positive(self):
        with pytest.raises(NonPositiveValue):
            log_squared(TimeSeries([1.0]), floor=0.0)


class TestSummaryStats:
    def test_constant_series(self):
        stats = summary_stats(TimeSeries([1.0, 1.0, 1.0, 1.0]))
        assert stats.mean == 1.0
        assert stats.variance == 0.0
        assert stats.n == 4

    def test_two_point_symmetry(self):
        stats = summary_stats(TimeSeries([-1.0, 1.0]))
        assert stats.mean == 0.0
        assert stats.variance == 1.0  # population convention
        assert stats.skewness == 0.0

    def test_standard_normal_sample(self):
        rng = np.random.default_rng(42)
        stats = summary_stats(TimeSeries(rng.standard_normal(10 ** 5)))
        assert abs(stats.mean) < 0.02
        assert abs(stats.variance - 1.0) < 0.02
        assert abs(stats.skewness) < 0.05
        assert stats.n == 10 ** 5

    def test_too_short(self):
        with pytest.raises(TooShort):
            summary_stats(TimeSeries([1.0]))

    def test_merged_with_itself_identical_moments(self):
        # power-of-two length keeps pairwise summation splits aligned
        rng = np.random.default_rng(3)
        x = rng.standard_normal(64)
        merged = np.concatenate([x, x])
        a = summary_stats(TimeSeries(x))
        b = summary_stats(TimeSeries(merged))
        assert a.mean == b.mean
        assert a.variance == b.variance


class TestHistogramWithNormal:
    def test_constant_series_degenerate(self):
        with pytest.raises(DegenerateVariance):
            histogram_with_normal(TimeSeries([2.0, 2.0, 2.0]), bins=4)

    def test_two_bins_one_count_each(self):
        hist = histogram_with_normal(TimeSeries([-1.0, 1.0]), bins=2)
        assert list(hist.counts) == [1, 1]
        assert hist.bin_edges.size == 3

    def test_density_close_to_normal_pdf(self):
        rng = np.random.default_rng(7)
        hist = histogram_with_normal(TimeSeries(rng.standard_normal(10 ** 4)),
                                     bins=50)
        assert np.max(np.abs(hist.density - hist.normal_pdf)) < 0.05

    def test_rows_are_plot_ready(self):
        hist = histogram_with_normal(TimeSeries([-1.0, 0.0, 1.0]), bins=2)
        rows = hist.rows()
        assert len(rows) == 2
        assert all(len(r) == 4 for r in rows)

    def test_bins_validation(self):
        with pytest.raises(ValueError):
            histogram_with_normal(TimeSeries([-1.0, 1.0]), bins=1)
