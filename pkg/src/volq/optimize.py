"""Shared maximum-likelihood driver.

Newton-Raphson on a transformed parameter space with finite-difference
derivatives, ridge-regularized Hessian, and backtracking line search.
Both volatility engines estimate through :func:`maximize`; neither supplies
analytic derivatives, so accuracy is guarded by the gradient-check tests.

Deterministic: identical inputs produce bit-identical iteration traces.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NonFiniteObjective

logger = logging.getLogger(__name__)

#: Central-difference step base: cube root of machine epsilon.
FD_STEP_DEFAULT = float(np.finfo(float).eps) ** (1.0 / 3.0)
#: Hessian step base: fourth root of machine epsilon.
_HESS_STEP = float(np.finfo(float).eps) ** 0.25
#: Ridge escalation for non-positive-definite Hessians.
_RIDGE_START = 1e-8
_RIDGE_LIMIT = 1e16
#: Transform names accepted in OptimizerConfig.transforms.
TRANSFORMS = ("free", "log_positive", "logit_unit")

Objective = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for :func:`maximize`.

    ``transforms`` names one reparameterization per coordinate; estimation
    runs in the unconstrained transformed space. Engines override this field
    with the map their parameter domain requires.
    """

    max_iter: int = 500
    grad_tol: float = 1e-6
    step_tol: float = 1e-10
    fd_step: float = FD_STEP_DEFAULT
    line_search: str = "backtracking"
    transforms: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if min(self.grad_tol, self.step_tol, self.fd_step) <= 0:
            raise ValueError("tolerances must be > 0")
        if self.line_search != "backtracking":
            raise ValueError("only backtracking line search is available")
        if self.transforms is not None:
            for name in self.transforms:
                if name not in TRANSFORMS:
                    raise ValueError(f"unknown transform {name!r}")


@dataclass(frozen=True)
class OptimResult:
    """Outcome of a maximization.

    ``argmax`` is on the original (constrained) scale; ``hessian`` is the
    symmetrized finite-difference Hessian at the optimum in the transformed
    space, which is what :func:`std_errors_from_hessian` expects.
    ``converged`` is the gradient-norm criterion; ``stop_reason`` records
    which criterion actually ended the iteration.
    """

    argmax: np.ndarray
    value: float
    gradient_norm: float
    hessian: np.ndarray
    converged: bool
    iterations: int
    trace: tuple[tuple[float, float], ...]
    stop_reason: str = ""


def transform(theta: np.ndarray, transforms: Sequence[str]) -> np.ndarray:
    """Map constrained parameters to the unconstrained space."""
    theta = np.asarray(theta, dtype=float)
    z = theta.copy()
    for i, name in enumerate(transforms):
        if name == "log_positive":
            z[i] = math.log(theta[i])
        elif name == "logit_unit":
            z[i] = math.log(theta[i] / (1.0 - theta[i]))
    return z


def _safe_exp(x: float) -> float:
    # math.exp raises OverflowError past ~709.78; line-search probes may
    # legitimately wander there, and inf lets the probe be rejected.
    return math.inf if x > 709.0 else math.exp(x)


def inverse_transform(z: np.ndarray, transforms: Sequence[str]) -> np.ndarray:
    """Map unconstrained parameters back to the constrained space."""
    z = np.asarray(z, dtype=float)
    theta = z.copy()
    for i, name in enumerate(transforms):
        if name == "log_positive":
            theta[i] = _safe_exp(z[i])
        elif name == "logit_unit":
            theta[i] = 1.0 / (1.0 + _safe_exp(-z[i]))
    return theta


def transform_jacobian(theta: np.ndarray, transforms: Sequence[str]) -> np.ndarray:
    """Diagonal of d(theta)/d(z) evaluated at theta (delta-method factors)."""
    theta = np.asarray(theta, dtype=float)
    jac = np.ones_like(theta)
    for i, name in enumerate(transforms):
        if name == "log_positive":
            jac[i] = theta[i]
        elif name == "logit_unit":
            jac[i] = theta[i] * (1.0 - theta[i])
    return jac


def numerical_gradient(objective: Objective, point: np.ndarray,
                       fd_step: float = FD_STEP_DEFAULT) -> np.ndarray:
    """Central-difference gradient, step scaled per coordinate."""
    x = np.asarray(point, dtype=float)
    grad = np.empty_like(x)
    for i in range(x.size):
        h = fd_step * max(1.0, abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        fp = objective(xp)
        fm = objective(xm)
        if not (math.isfinite(fp) and math.isfinite(fm)):
            raise NonFiniteObjective(
                f"objective not finite near coordinate {i}",
                op="optimize.numerical_gradient")
        grad[i] = (fp - fm) / (2.0 * h)
    return grad


def _fd_hessian(objective: Objective, point: np.ndarray,
                step: float = _HESS_STEP) -> np.ndarray:
    """Symmetric finite-difference Hessian (central, 4-point off-diagonal)."""
    x = np.asarray(point, dtype=float)
    d = x.size
    h = step * np.maximum(1.0, np.abs(x))
    hess = np.empty((d, d))
    f0 = objective(x)
    for i in range(d):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h[i]
        xm[i] -= h[i]
        hess[i, i] = (objective(xp) - 2.0 * f0 + objective(xm)) / h[i] ** 2
        for j in range(i + 1, d):
            xpp = x.copy(); xpm = x.copy(); xmp = x.copy(); xmm = x.copy()
            xpp[i] += h[i]; xpp[j] += h[j]
            xpm[i] += h[i]; xpm[j] -= h[j]
            xmp[i] -= h[i]; xmp[j] += h[j]
            xmm[i] -= h[i]; xmm[j] -= h[j]
            hij = (objective(xpp) - objective(xpm)
                   - objective(xmp) + objective(xmm)) / (4.0 * h[i] * h[j])
            hess[i, j] = hij
            hess[j, i] = hij
    if not np.all(np.isfinite(hess)):
        hess[~np.isfinite(hess)] = 0.0
    return hess


def _newton_direction(hessian: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """Ascent direction from the (regularized) Newton system.

    Solves (-H + ridge*I) s = g, escalating the ridge by factors of 10 from
    1e-8 until the matrix is positive definite. Falls back to plain gradient
    ascent when no usable system exists.
    """
    a = -hessian
    d = grad.size
    ridge = 0.0
    while ridge <= _RIDGE_LIMIT:
        try:
            chol = np.linalg.cholesky(a + ridge * np.eye(d))
            step = np.linalg.solve(chol.T, np.linalg.solve(chol, grad))
            if np.all(np.isfinite(step)) and float(grad @ step) > 0.0:
                return step
        except np.linalg.LinAlgError:
            pass
        ridge = _RIDGE_START if ridge == 0.0 else ridge * 10.0
    return grad.copy()


def maximize(objective: Objective, init: np.ndarray,
             config: OptimizerConfig | None = None) -> OptimResult:
    """Maximize a scalar objective by Newton-Raphson with finite differences.

    Parameters
    ----------
    objective : callable
        Maps a parameter vector (original scale) to a finite float.
    init : array_like
        Starting point on the original scale; must satisfy the transforms'
        domain (e.g. positive where ``log_positive``).
    config : OptimizerConfig, optional

    Returns
    -------
    OptimResult
        Best point found. On hitting ``max_iter`` the best-so-far is
        returned with ``converged=False`` rather than raising.
    """
    config = config or OptimizerConfig()
    init = np.asarray(init, dtype=float)
    transforms = config.transforms or ("free",) * init.size
    if len(transforms) != init.size:
        raise ValueError("transforms length must match parameter count")

    def obj_z(z: np.ndarray) -> float:
        return float(objective(inverse_transform(z, transforms)))

    z = transform(init, transforms)
    f_current = obj_z(z)
    if not math.isfinite(f_current):
        raise NonFiniteObjective("objective not finite at the initial point",
                                 op="optimize.maximize")

    trace: list[tuple[float, float]] = [(f_current, 0.0)]
    grad = numerical_gradient(obj_z, z, config.fd_step)
    iterations = 0
    stop_reason = "max_iter"
    for _ in range(config.max_iter):
        grad_norm = float(np.max(np.abs(grad)))
        if grad_norm <= config.grad_tol:
            stop_reason = "gradient"
            break
        hessian = _fd_hessian(obj_z, z)
        direction = _newton_direction(hessian, grad)

        scale = 1.0
        improved = False
        for _ in range(60):
            candidate = z + scale * direction
            f_candidate = obj_z(candidate)
            if math.isfinite(f_candidate) and f_candidate > f_current:
                improved = True
                break
            scale *= 0.5
        if not improved:
            stop_reason = "no_ascent"
            break

        step_size = float(np.max(np.abs(scale * direction)))
        z = candidate
        f_current = f_candidate
        iterations += 1
        trace.append((f_current, step_size))
        logger.debug("iter %d: value=%.10g step=%.3g", iterations,
                     f_current, step_size)
        grad = numerical_gradient(obj_z, z, config.fd_step)
        if step_size <= config.step_tol:
            stop_reason = "step"
            break

    grad_norm = float(np.max(np.abs(grad)))
    hessian = _fd_hessian(obj_z, z)
    return OptimResult(argmax=inverse_transform(z, transforms),
                       value=f_current,
                       gradient_norm=grad_norm,
                       hessian=hessian,
                       converged=grad_norm <= config.grad_tol,
                       iterations=iterations,
                       trace=tuple(trace),
                       stop_reason=stop_reason)


def std_errors_from_hessian(hessian: np.ndarray,
                            transforms: Sequence[str] | None = None,
                            argmax: np.ndarray | None = None,
                            ) -> tuple[np.ndarray, bool]:
    """Standard errors from the negated inverse Hessian at the optimum.

    ``hessian`` is in the transformed space; with ``transforms`` and
    ``argmax`` given, errors are mapped back through the transform
    Jacobians (delta method). Coordinates that cannot be inverted get an
    ``inf`` sentinel (never NaN) and the second return value flags that
    the Hessian was singular or not negative definite.
    """
    hessian = np.asarray(hessian, dtype=float)
    a = -0.5 * (hessian + hessian.T)
    d = a.shape[0]
    singular = False
    try:
        cov = np.linalg.inv(a)
        diag = np.diag(cov).copy()
    except np.linalg.LinAlgError:
        diag = np.full(d, -1.0)
    usable = np.isfinite(diag) & (diag > 0.0)
    se = np.full(d, np.inf)
    se[usable] = np.sqrt(diag[usable])
    if not np.all(usable):
        singular = True
    if transforms is not None:
        if argmax is None:
            raise ValueError("argmax is required to map through transforms")
        se = np.abs(transform_jacobian(np.asarray(argmax, float), transforms)) * se
    return se, singular
