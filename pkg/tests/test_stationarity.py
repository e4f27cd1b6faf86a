import warnings

import numpy as np
import pytest
import statsmodels.tsa.stattools as smt
from numpy.testing import assert_allclose

from volq import (Ar1Params, SimSpec, TimeSeries, adf_test, kpss_test,
                  simulate)
from volq.errors import SingularRegression, TooShort
from volq.stationarity import default_adf_lag, default_kpss_lag


class TestAdf:
    def test_white_noise_rejects_unit_root(self, white_noise_2000):
        report = adf_test(white_noise_2000)
        assert report.decision == "reject_null"
        assert report.p_value == 0.01
        assert report.p_clamped == "at_lower"

    def test_random_walk_fails_to_reject(self, random_walk_2000):
        report = adf_test(random_walk_2000)
        assert report.decision == "fail_to_reject"

    def test_statistic_matches_statsmodels(self, white_noise_2000):
        ours = adf_test(white_noise_2000)
        theirs = smt.adfuller(white_noise_2000.values, maxlag=ours.lag,
                              regression="ct", autolag=None)
        assert_allclose(ours.statistic, theirs[0], rtol=1e-8)

    def test_drift_variant_matches_statsmodels(self, white_noise_2000):
        ours = adf_test(white_noise_2000, lag=4, regression="drift")
        theirs = smt.adfuller(white_noise_2000.values, maxlag=4,
                              regression="c", autolag=None)
        assert_allclose(ours.statistic, theirs[0], rtol=1e-8)

    def test_scale_invariance(self, white_noise_2000):
        base = adf_test(white_noise_2000).statistic
        for c in (0.1, 10.0):
            scaled = TimeSeries(c * white_noise_2000.values)
            assert abs(adf_test(scaled).statistic - base) < 1e-8

    def test_explosive_series_clamps_at_upper(self):
        rng = np.random.default_rng(2)
        x = np.empty(300)
        prev = 0.0
        for t in range(300):
            prev = 1.05 * prev + rng.standard_normal() + 0.1
            x[t] = prev
        report = adf_test(TimeSeries(x))
        assert report.p_value == 0.99
        assert report.p_clamped == "at_upper"

    def test_default_lag_schwert_rule(self):
        assert default_adf_lag(2000) == 25
        assert default_adf_lag(100) == 12

    def test_too_short(self):
        with pytest.raises(TooShort):
            adf_test(TimeSeries(np.arange(10.0)), lag=4)

    def test_constant_series_singular(self):
        with pytest.raises(SingularRegression):
            adf_test(TimeSeries(np.ones(200)), lag=2)

    def test_tie_at_alpha_fails_to_reject(self, random_walk_2000):
        report = adf_test(random_walk_2000)
        tied = adf_test(random_walk_2000, alpha=report.p_value)
        assert tied.decision == "fail_to_reject"


class TestKpss:
    def test_white_noise_fails_to_reject(self):
        rejections = 0
        for seed in range(20):
            s = simulate(SimSpec(kind="white_noise", n=2000, seed=seed)).series
            if kpss_test(s).decision == "reject_null":
                rejections += 1
        assert rejections <= 3

    def test_random_walk_rejects(self, random_walk_2000):
        report = kpss_test(random_walk_2000)
        assert report.decision == "reject_null"
        assert report.p_value == 0.01
        assert report.p_clamped == "at_lower"

    def test_statistic_matches_statsmodels(self, white_noise_2000):
        ours = kpss_test(white_noise_2000)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            theirs = smt.kpss(white_noise_2000.values, regression="c",
                              nlags=ours.lag)
        assert_allclose(ours.statistic, theirs[0], rtol=1e-8)

    def test_shift_invariance(self, white_noise_2000):
        base = kpss_test(white_noise_2000).statistic
        shifted = TimeSeries(white_noise_2000.values + 117.0)
        assert abs(kpss_test(shifted).statistic - base) < 1e-8

    def test_strongly_stationary_clamps_at_upper(self):
        s = simulate(SimSpec(kind="ar1", n=2000, seed=4,
                             params=Ar1Params(phi=-0.8))).series
        report = kpss_test(s)
        assert report.p_value == 0.10
        assert report.p_clamped == "at_upper"

    def test_default_lag(self):
        assert default_kpss_lag(2000) == 8
        assert default_kpss_lag(100) == 4


class TestDecisionRates:
    """Reduced-count versions of the size/power checks (full counts run in
    the acceptance suite)."""

    def test_adf_power_on_white_noise(self):
        hits = sum(
            adf_test(simulate(SimSpec(kind="white_noise", n=2000,
                                      seed=s)).series).decision == "reject_null"
            for s in range(20))
        assert hits >= 19

    def test_adf_size_on_random_walks(self):
        hits = sum(
            adf_test(simulate(SimSpec(kind="random_walk", n=2000,
                                      seed=s)).series).decision == "fail_to_reject"
            for s in range(20))
        assert hits >= 18

    def test_kpss_power_on_random_walks(self):
        hits = sum(
            kpss_test(simulate(SimSpec(kind="random_walk", n=2000,
                                       seed=s)).series).decision == "reject_null"
            for s in range(20))
        assert hits >= 18
