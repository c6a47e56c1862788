"""Binary cross-entropy, residual diagnostics and likelihood oracles.

The cross-entropy is the large-``m`` saddle point of the probability that a
Bernoulli output layer reproduces the labels.  Two independent checks of that
statement live here: :func:`bernoulli_nll_oracle` multiplies the per-example
Bernoulli weights directly, and :func:`saddle_point_lambda` can locate the
stationary Lagrange multiplier numerically instead of using the closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidArgumentError, ShapeError

EPS_CLAMP = 1e-12


def _pair(y_hat, y):
    y_hat = np.asarray(y_hat, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if y_hat.shape != y.shape:
        raise ShapeError(f"{y_hat.size} predictions vs {y.size} labels")
    if y.size == 0:
        raise ShapeError("empty batch")
    return np.clip(y_hat, EPS_CLAMP, 1.0 - EPS_CLAMP), y


def bce_loss(y_hat, y) -> float:
    """Mean negative log-likelihood of binary labels under ``y_hat``."""
    q, y = _pair(y_hat, y)
    return float(-np.mean(y * np.log(q) + (1.0 - y) * np.log1p(-q)))


def bernoulli_nll_oracle(q, y) -> float:
    """``-(1/m) log prod_mu q^y (1-q)^(1-y)`` by explicit multiplication.

    The running product is renormalised with ``frexp`` so that long batches of
    small weights cannot underflow.
    """
    q, y = _pair(q, y)
    mantissa, exponent = 1.0, 0
    for q_mu, y_mu in zip(q.tolist(), y.tolist()):
        weight = q_mu ** y_mu * (1.0 - q_mu) ** (1.0 - y_mu)
        mantissa, e = math.frexp(mantissa * weight)
        exponent += e
    log_like = math.log(mantissa) + exponent * math.log(2.0)
    return -log_like / q.size


def _check_open(name, v):
    if not (0.0 < v < 1.0):
        raise DomainError(f"{name}={v!r} must lie strictly inside (0, 1)")


def saddle_point_lambda(y: float, q: float, method: str = "closed") -> float:
    """Stationary multiplier ``Lambda = -i lambda_c`` of the outcome integral.

    ``method="closed"`` returns ``log(y (1-q) / (q (1-y)))``.
    ``method="bisect"`` instead solves ``dS/dlambda = 0`` along ``lambda = i*Lambda``
    by bisection on ``[-50, 50]``.
    """
    _check_open("y", y)
    _check_open("q", q)
    if method == "closed":
        return math.log(y * (1.0 - q) / (q * (1.0 - y)))
    if method != "bisect":
        raise InvalidArgumentError(f"unknown method {method!r}")
    return _bisect_stationary(y, q)


def saddle_action_derivative(lam: complex, y: float, q: float) -> complex:
    """``dS/dlambda`` for one example: ``i y - i q e^{-i lam} / (q e^{-i lam} + 1 - q)``."""
    z = q * np.exp(-1j * lam)
    return 1j * y - 1j * z / (z + (1.0 - q))


def _bisect_stationary(y, q, lo=-50.0, hi=50.0, tol=1e-13, max_iter=200):
    # on the imaginary axis the derivative is i * (real, decreasing in Lambda)
    def f(big_lam):
        return saddle_action_derivative(1j * big_lam, y, q).imag

    f_lo, f_hi = f(lo), f(hi)
    if f_lo * f_hi > 0:
        raise DomainError(f"no sign change of the stationarity condition on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0 or hi - lo < tol:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ResidualReport:
    residuals: np.ndarray
    zero_fraction: float
    tolerance: float


def residual_report(y_hat, y, tolerance: float = 0.05) -> ResidualReport:
    if not tolerance > 0:
        raise InvalidArgumentError("tolerance must be > 0")
    y_hat = np.asarray(y_hat, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if y_hat.shape != y.shape or y.size == 0:
        raise ShapeError(f"{y_hat.size} predictions vs {y.size} labels")
    e = y_hat - y
    return ResidualReport(e, float(np.mean(np.abs(e) <= tolerance)), float(tolerance))
