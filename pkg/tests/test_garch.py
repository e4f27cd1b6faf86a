import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from volq import (GarchFit, GarchModel, OptimizerConfig, SimSpec, TimeSeries,
                  fit_garch, garch_forecast, garch_loglik,
                  garch_variance_path, simulate, standardized_residuals)
from volq.errors import (DegenerateVariance, InvalidFit, InvalidParams,
                         TooShort)


def brute_force_loglik(model: GarchModel, y: np.ndarray,
                       init_var: float) -> float:
    """Independent re-implementation: plain loop + Normal log-pdf."""
    m, n = model.order_m, model.order_n
    sig2 = []
    for t in range(y.size):
        s = model.a0
        for j in range(1, m + 1):
            s += model.a[j - 1] * (y[t - j] ** 2 if t - j >= 0 else init_var)
        for j in range(1, n + 1):
            s += model.b[j - 1] * (sig2[t - j] if t - j >= 0 else init_var)
        sig2.append(s)
    ll = 0.0
    for t in range(y.size):
        ll += -0.5 * (math.log(2 * math.pi * sig2[t]) + y[t] ** 2 / sig2[t])
    return ll


def fit_stub(model: GarchModel, series: TimeSeries) -> GarchFit:
    """GarchFit carrying known parameters (no estimation)."""
    k = 1 + model.order_m + model.order_n
    return GarchFit(model=model, std_errors=np.zeros(k), t_stats=np.zeros(k),
                    p_values=np.ones(k),
                    variance_path=garch_variance_path(model, series),
                    loglik=garch_loglik(model, series), converged=True,
                    iterations=0)


class TestGarchModel:
    def test_validation(self):
        with pytest.raises(InvalidParams):
            GarchModel(a0=0.0, a=(0.1,))
        with pytest.raises(InvalidParams):
            GarchModel(a0=1.0, a=(-0.1,))
        with pytest.raises(InvalidParams):
            GarchModel(a0=1.0, a=())

    @pytest.mark.parametrize("a0,a1,b1", [
        (1.25e-07, 0.247, 0.721),
        (2.86e-08, 0.179, 0.709),
        (0.02167, 0.15914, 0.61185),
        (1.31e-07, 0.277, 0.483),
    ])
    def test_reference_estimates_are_stationary(self, a0, a1, b1):
        model = GarchModel(a0=a0, a=(a1,), b=(b1,))
        assert model.persistence < 1.0
        assert model.is_stationary

    def test_persistence_value(self):
        model = GarchModel(a0=1.25e-07, a=(0.247,), b=(0.721,))
        assert_allclose(model.persistence, 0.968, atol=1e-12)


class TestVariancePath:
    def test_constant_when_coefficients_zero(self):
        model = GarchModel(a0=2.5, a=(0.0,))
        path = garch_variance_path(model, TimeSeries([0.4, -1.0, 2.0]))
        assert_allclose(path, [2.5, 2.5, 2.5])

    def test_hand_evaluated_recursion(self):
        model = GarchModel(a0=1.0, a=(0.5,))
        path = garch_variance_path(model, TimeSeries([0.0, 2.0]),
                                   init_variance=1.0)
        assert_allclose(path, [1.5, 1.0])

    def test_positivity(self):
        rng = np.random.default_rng(0)
        model = GarchModel(a0=1e-8, a=(0.2, 0.1), b=(0.5,))
        path = garch_variance_path(model, TimeSeries(rng.standard_normal(500)))
        assert np.all(path > 0)

    def test_default_presample_is_sample_variance(self):
        y = np.array([1.0, -1.0, 2.0, 0.5])
        var = float(np.mean((y - y.mean()) ** 2))
        model = GarchModel(a0=0.3, a=(0.4,), b=(0.2,))
        auto = garch_variance_path(model, TimeSeries(y))
        manual = garch_variance_path(model, TimeSeries(y), init_variance=var)
        assert_allclose(auto, manual, rtol=1e-15)


class TestLoglik:
    def test_single_zero_observation(self):
        model = GarchModel(a0=1.0, a=(0.0,))
        ll = garch_loglik(model, TimeSeries([0.0]))
        assert_allclose(ll, -0.5 * math.log(2 * math.pi), rtol=1e-14)

    def test_single_unit_observation(self):
        model = GarchModel(a0=1.0, a=(0.0,))
        ll = garch_loglik(model, TimeSeries([1.0]))
        assert_allclose(ll, -0.5 * math.log(2 * math.pi) - 0.5, rtol=1e-14)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        y = rng.standard_normal(80)
        model = GarchModel(a0=float(rng.uniform(0.1, 1.0)),
                           a=(float(rng.uniform(0.0, 0.3)),),
                           b=(float(rng.uniform(0.0, 0.6)),))
        init_var = float(np.mean((y - y.mean()) ** 2))
        assert_allclose(garch_loglik(model, TimeSeries(y)),
                        brute_force_loglik(model, y, init_var), rtol=1e-10)


class TestArmaIdentity:
    def test_squared_process_reconstruction(self, garch11_true):
        sim = simulate(SimSpec(kind="garch", n=1000, seed=17,
                               params=garch11_true))
        y = sim.series.values
        sig2 = sim.latent["sigma2"]
        eta2 = (y / np.sqrt(sig2)) ** 2
        phi = sig2 * (eta2 - 1.0)
        a1, b1 = garch11_true.a[0], garch11_true.b[0]
        rhs = (garch11_true.a0 + (a1 + b1) * y[:-1] ** 2
               + phi[1:] - b1 * phi[:-1])
        assert np.max(np.abs(y[1:] ** 2 - rhs)) <= 1e-10


class TestFit:
    def test_recovers_known_parameters(self, garch11_true):
        sim = simulate(SimSpec(kind="garch", n=10000, seed=11,
                               params=garch11_true))
        fit = fit_garch(sim.series)
        assert fit.converged
        truth = garch11_true.param_vector()
        assert np.all(np.abs(fit.model.param_vector() - truth)
                      <= 3.0 * fit.std_errors)

    def test_report_shape_three_rows(self, garch11_sim):
        fit = fit_garch(garch11_sim.series)
        assert fit.model.param_names() == ["a0", "a1", "b1"]
        assert fit.std_errors.shape == (3,)
        assert fit.t_stats.shape == (3,)
        assert fit.p_values.shape == (3,)
        assert np.all((fit.p_values >= 0) & (fit.p_values <= 1))

    def test_constant_series_degenerate(self):
        with pytest.raises(DegenerateVariance):
            fit_garch(TimeSeries(np.zeros(100)))

    def test_too_short(self):
        with pytest.raises(TooShort):
            fit_garch(TimeSeries(np.arange(10.0)))

    def test_invariant_to_label_and_timestamps(self, garch11_sim):
        values = garch11_sim.series.values
        fit_a = fit_garch(TimeSeries(values, label="a"))
        fit_b = fit_garch(TimeSeries(values, label="b",
                                     timestamps=np.arange(values.size)))
        assert np.array_equal(fit_a.model.param_vector(),
                              fit_b.model.param_vector())
        assert np.array_equal(fit_a.std_errors, fit_b.std_errors)

    def test_scaling_rescales_a0_only(self, garch11_sim):
        fit1 = fit_garch(garch11_sim.series)
        scaled = TimeSeries(10.0 * garch11_sim.series.values)
        fit2 = fit_garch(scaled)
        assert_allclose(fit2.model.a0, 100.0 * fit1.model.a0, rtol=1e-3)
        assert_allclose(fit2.model.a[0], fit1.model.a[0], atol=1e-3)
        assert_allclose(fit2.model.b[0], fit1.model.b[0], atol=1e-3)

    def test_gradient_half_step_agreement(self, garch11_sim):
        # Richardson-style check at interior points (full run in acceptance)
        from volq import numerical_gradient
        y = garch11_sim.series

        def objective(theta):
            model = GarchModel(a0=theta[0], a=(theta[1],), b=(theta[2],))
            return garch_loglik(model, y)

        rng = np.random.default_rng(8)
        for _ in range(3):
            point = np.array([rng.uniform(5e-7, 2e-6),
                              rng.uniform(0.05, 0.2),
                              rng.uniform(0.5, 0.9)])
            h = 1e-5
            g1 = numerical_gradient(objective, point, h)
            g2 = numerical_gradient(objective, point, h / 2)
            denom = max(float(np.max(np.abs(g2))), 1.0)
            assert np.max(np.abs(g1 - g2)) / denom < 1e-4


class TestForecast:
    def test_constant_model_forecasts_a0(self):
        model = GarchModel(a0=0.7, a=(0.0,))
        series = TimeSeries([0.5, -0.2, 1.0])
        path = garch_forecast(fit_stub(model, series), series, horizon=3)
        assert_allclose(path.center, np.full(6, 0.7))
        assert_allclose(path.half_width, np.full(6, 2.0 * math.sqrt(0.7)))
        assert path.scale == "variance"

    def test_hand_rolled_three_point_forecast(self):
        model = GarchModel(a0=0.5, a=(0.2,), b=(0.3,))
        y = np.array([1.0, -2.0, 0.5])
        series = TimeSeries(y)
        iv = float(np.mean((y - y.mean()) ** 2))
        s0 = 0.5 + 0.2 * iv + 0.3 * iv
        s1 = 0.5 + 0.2 * 1.0 + 0.3 * s0
        s2 = 0.5 + 0.2 * 4.0 + 0.3 * s1
        s3 = 0.5 + 0.2 * 0.25 + 0.3 * s2          # one step out: last y known
        s4 = 0.5 + 0.2 * s3 + 0.3 * s3            # two steps out: y^2 -> sigma2
        path = garch_forecast(fit_stub(model, series), series, horizon=2)
        assert_allclose(path.center, [s0, s1, s2, s3, s4], rtol=1e-12)
        assert_allclose(path.half_width, 2.0 * np.sqrt(path.center))

    def test_band_coverage_near_95_percent(self, garch11_true):
        sim = simulate(SimSpec(kind="garch", n=20000, seed=5,
                               params=garch11_true))
        path = garch_forecast(fit_stub(garch11_true, sim.series), sim.series,
                              horizon=0)
        inside = np.abs(sim.series.values) <= path.half_width
        assert 0.93 <= inside.mean() <= 0.97

    def test_unconverged_fit_rejected(self, garch11_sim):
        fit = fit_garch(garch11_sim.series,
                        config=OptimizerConfig(max_iter=1))
        assert not fit.converged
        with pytest.raises(InvalidFit):
            garch_forecast(fit, garch11_sim.series)
        # explicit override works
        garch_forecast(fit, garch11_sim.series, allow_unconverged=True)


class TestStandardizedResiduals:
    def test_unit_variance_returns_series(self):
        model = GarchModel(a0=1.0, a=(0.0,))
        series = TimeSeries([0.3, -0.VALUES, 1.1])
        resid = standardized_residuals(fit_stub(model, series), series)
        assert_allclose(resid.values, series.values)

    def test_sign_preserved(self, garch11_true, garch11_sim):
        resid = standardized_residuals(fit_stub(garch11_true, garch11_sim.series),
                                       garch11_sim.series)
        assert np.array_equal(np.sign(resid.values),
                              np.sign(garch11_sim.series.values))

    def test_mean_squared_residual_near_one(self, garch11_true):
        sim = simulate(SimSpec(kind="garch", n=8000, seed=23,
                               params=garch11_true))
        resid = standardized_residuals(fit_stub(garch11_true, sim.series),
                                       sim.series)
        assert abs(np.mean(resid.values ** 2) - 1.0) < 0.05
