"""Seeded synthetic series: GARCH, SV, white noise, random walks, AR(1).

All generators draw from numpy's PCG64 bit generator seeded per spec, so a
SimSpec maps to bit-identical output on every run; the generator identity
is recorded on each result and in every emitted header. Burn-in applies to
the stationary recursions (garch, sv, ar1) and is ignored for white noise
and random walks, whose draws have no transient to wash out.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import InvalidParams
from .garch import GarchModel
from .series import TimeSeries
from .sv import SvParams, simulate_sv

#: Identity of the pseudo-random generator backing every simulation.
GENERATOR_ID = "numpy-pcg64"

SIM_KINDS = ("garch", "sv", "white_noise", "random_walk", "ar1")


@dataclass(frozen=True)
class WhiteNoiseParams:
    mean: float = 0.0
    sd: float = 1.0

    def __post_init__(self):
        if self.sd <= 0:
            raise InvalidParams("sd must be > 0", op="simulate.WhiteNoiseParams")


@dataclass(frozen=True)
class RandomWalkParams:
    sd: float = 1.0
    start: float = 0.0

    def __post_init__(self):
        if self.sd <= 0:
            raise InvalidParams("sd must be > 0", op="simulate.RandomWalkParams")


@dataclass(frozen=True)
class Ar1Params:
    intercept: float = 0.0
    phi: float = 0.5
    sd: float = 1.0

    def __post_init__(self):
        if self.sd <= 0:
            raise InvalidParams("sd must be > 0", op="simulate.Ar1Params")
        if abs(self.phi) >= 1:
            raise InvalidParams("|phi| must be < 1 for a stationary AR(1)",
                                op="simulate.Ar1Params")


ParamRecord = GarchModel | SvParams | WhiteNoiseParams | RandomWalkParams | Ar1Params

_DEFAULT_PARAMS = {
    "garch": lambda: GarchModel(a0=1e-6, a=(0.10,), b=(0.85,)),
    "sv": lambda: SvParams(alpha0=0.0, alpha1=0.96, sigma_w=0.3, lam=-10.0,
                           sigma0=1.0, phi1=-4.0, sigma1=3.0),
    "white_noise": WhiteNoiseParams,
    "random_walk": RandomWalkParams,
    "ar1": Ar1Params,
}


@dataclass(frozen=True)
class SimSpec:
    """What to simulate: model kind, parameter record, length, seed."""

    kind: str
    n: int
    seed: int
    params: ParamRecord | None = None
    burn_in: int = 500

    def __post_init__(self):
        if self.kind not in SIM_KINDS:
            raise InvalidParams(f"kind must be one of {SIM_KINDS}",
                                op="simulate.SimSpec")
        if self.n < 1:
            raise InvalidParams("n must be >= 1", op="simulate.SimSpec")
        if self.burn_in < 0:
            raise InvalidParams("burn_in must be >= 0", op="simulate.SimSpec")
        if self.params is None:
            object.__setattr__(self, "params", _DEFAULT_PARAMS[self.kind]())


@dataclass(frozen=True)
class SimResult:
    """Simulated series plus latent paths where the model has them."""

    series: TimeSeries
    latent: dict[str, np.ndarray] = field(default_factory=dict)
    generator: str = GENERATOR_ID


@njit(cache=True)
def _garch_sim_kernel(eta, a0, a, b, init_var):  # pragma: no cover - jitted
    total = eta.shape[0]
    m = a.shape[0]
    q = b.shape[0]
    sig2 = np.empty(total)
    y = np.empty(total)
    for t in range(total):
        s = a0
        for j in range(m):
            k = t - 1 - j
            s += a[j] * (y[k] * y[k] if k >= 0 else init_var)
        for j in range(q):
            k = t - 1 - j
            s += b[j] * (sig2[k] if k >= 0 else init_var)
        sig2[t] = s
        y[t] = np.sqrt(s) * eta[t]
    return y, sig2


def _simulate_garch(model: GarchModel, n: int, seed: int,
                    burn_in: int) -> SimResult:
    rng = np.random.default_rng(seed)
    total = burn_in + n
    eta = rng.standard_normal(total)
    init_var = (model.a0 / (1.0 - model.persistence)
                if model.is_stationary else model.a0)
    y, sig2 = _garch_sim_kernel(eta, model.a0, np.array(model.a),
                                np.array(model.b), init_var)
    series = TimeSeries(y[burn_in:], label=f"garch-sim-seed{seed}")
    return SimResult(series=series,
                     latent={"sigma2": sig2[burn_in:],
                             "eta": eta[burn_in:]})


def simulate(spec: SimSpec) -> SimResult:
    """Generate the series described by ``spec``; deterministic given seed."""
    params = spec.params
    if spec.kind == "garch":
        if not isinstance(params, GarchModel):
            raise InvalidParams("garch simulation needs GarchModel params",
                                op="simulate.simulate")
        return _simulate_garch(params, spec.n, spec.seed, spec.burn_in)

    if spec.kind == "sv":
        if not isinstance(params, SvParams):
            raise InvalidParams("sv simulation needs SvParams",
                                op="simulate.simulate")
        y, v = simulate_sv(params, spec.n, spec.seed, burn_in=spec.burn_in)
        return SimResult(series=y, latent={"log_vol": v.values})

    rng = np.random.default_rng(spec.seed)
    if spec.kind == "white_noise":
        draws = params.mean + params.sd * rng.standard_normal(spec.n)
        return SimResult(series=TimeSeries(
            draws, label=f"white-noise-seed{spec.seed}"))

    if spec.kind == "random_walk":
        steps = params.sd * rng.standard_normal(spec.n)
        walk = params.start + np.cumsum(steps)
        return SimResult(series=TimeSeries(
            walk, label=f"random-walk-seed{spec.seed}"))

    # ar1
    total = spec.burn_in + spec.n
    shocks = params.sd * rng.standard_normal(total)
    x = np.empty(total)
    prev = params.intercept / (1.0 - params.phi)
    for t in range(total):
        prev = params.intercept + params.phi * prev + shocks[t]
        x[t] = prev
    return SimResult(series=TimeSeries(
        x[spec.burn_in:], label=f"ar1-sim-seed{spec.seed}"))
