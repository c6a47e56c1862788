"""Mean-field activations of a binary synaptic gate.

A hidden unit receives a field ``h`` and opens a two-state gate ``s`` with
probability ``sigmoid(beta * h)``.  The partition function of the gate is
``Z = 1 + exp(beta * h)``; its bias derivative gives the expected gate and its
``beta`` derivative gives the expected transmitted signal ``h * sigmoid(beta*h)``
(Swish).  ReLU and the linear map are the ``beta -> inf`` and ``beta -> 0``
limits of Swish (the latter up to a factor 1/2).

All functions accept scalars or numpy arrays and broadcast ``h`` against
``beta``.  Everything is float64.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

# above this value of beta*h, log(1 + e^x) is evaluated as x + log1p(e^-x)
_LOGZ_CROSSOVER = 30.0


class ActivationKind(str, enum.Enum):
    SIGMOID = "sigmoid"
    TANH = "tanh"
    RELU = "relu"
    LINEAR = "linear"
    SWISH = "swish"

    @classmethod
    def parse(cls, value: "str | ActivationKind") -> "ActivationKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise InvalidArgumentError(f"unknown activation {value!r}; expected one of {valid}")

    @property
    def depends_on_beta(self) -> bool:
        return self in (ActivationKind.SWISH, ActivationKind.SIGMOID, ActivationKind.TANH)


@dataclass(frozen=True)
class NoiseParam:
    """Inverse-noise scale of one layer."""

    beta: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta <= 0:
            raise InvalidArgumentError(f"beta must be a finite positive number, got {self.beta!r}")

    def __float__(self):
        return float(self.beta)


def _as_beta(beta) -> np.ndarray | float:
    if isinstance(beta, float):
        if not (math.isfinite(beta) and beta > 0):
            raise InvalidArgumentError(f"beta must be finite and > 0, got {beta!r}")
        return beta
    b = np.asarray(float(beta) if isinstance(beta, NoiseParam) else beta, dtype=np.float64)
    if not np.all(np.isfinite(b)) or np.any(b <= 0):
        raise InvalidArgumentError(f"beta must be finite and > 0, got {beta!r}")
    return b


def _as_field(h) -> np.ndarray:
    h = np.asarray(h, dtype=np.float64)
    if not np.all(np.isfinite(h)):
        raise InvalidArgumentError("pre-activation contains non-finite values")
    return h


def _out(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def sigmoid(x):
    """Logistic function, evaluated without overflow for any finite ``x``."""
    x = np.asarray(x, dtype=np.float64)
    e = np.exp(-np.abs(x))
    r = 1.0 / (1.0 + e)
    return _out(np.where(x >= 0, r, e * r))


def _sigmoid_pair(x):
    """``(sigmoid(x), sigmoid(-x))`` from a single exponential."""
    e = np.exp(-np.abs(x))
    r = 1.0 / (1.0 + e)
    er = e * r
    pos = x >= 0
    return np.where(pos, r, er), np.where(pos, er, r)


def log_partition(h, beta=1.0):
    """``log(1 + exp(beta * h))`` of the two-state gate."""
    x = _as_field(h) * _as_beta(beta)
    big = x > _LOGZ_CROSSOVER
    safe = np.where(big, 0.0, x)
    return _out(np.where(big, x + np.log1p(np.exp(-np.abs(x))), np.log1p(np.exp(safe))))


def expected_gate(h, beta=1.0):
    """Probability that the gate is open, ``sigmoid(beta * h)``."""
    return sigmoid(_as_field(h) * _as_beta(beta))


def activate(kind, h, beta=1.0):
    kind = ActivationKind.parse(kind)
    h = _as_field(h)
    b = _as_beta(beta)
    if kind is ActivationKind.SWISH:
        return _out(expected_gate(h, b) * h)
    if kind is ActivationKind.SIGMOID:
        return _out(sigmoid(b * h))
    if kind is ActivationKind.TANH:
        return _out(np.tanh(b * h) + np.zeros_like(h))
    if kind is ActivationKind.RELU:
        return _out(np.maximum(h, 0.0) + np.zeros_like(b))
    return _out(h + np.zeros_like(b))


def activate_dh(kind, h, beta=1.0):
    """Derivative of :func:`activate` with respect to the field ``h``.

    ReLU uses the subgradient 0 at ``h == 0``.  The Sigmoid and Tanh branches
    carry the chain-rule factor ``beta``.
    """
    kind = ActivationKind.parse(kind)
    h = _as_field(h)
    b = _as_beta(beta)
    if kind is ActivationKind.SWISH:
        s_pos, s_neg = _sigmoid_pair(b * h)
        return _out(s_pos * (1.0 + b * h * s_neg))
    if kind is ActivationKind.SIGMOID:
        s_pos, s_neg = _sigmoid_pair(b * h)
        return _out(b * s_pos * s_neg)
    if kind is ActivationKind.TANH:
        t = np.tanh(b * h)
        return _out(b * (1.0 - t * t))
    if kind is ActivationKind.RELU:
        return _out((h > 0).astype(np.float64) + np.zeros_like(b))
    return _out(np.ones_like(h) + np.zeros_like(b))


def activate_dbeta(kind, h, beta=1.0):
    """Derivative of :func:`activate` with respect to ``beta``."""
    kind = ActivationKind.parse(kind)
    h = _as_field(h)
    b = _as_beta(beta)
    if kind is ActivationKind.SWISH:
        s_pos, s_neg = _sigmoid_pair(b * h)
        return _out(h * h * s_pos * s_neg)
    if kind is ActivationKind.SIGMOID:
        s_pos, s_neg = _sigmoid_pair(b * h)
        return _out(h * s_pos * s_neg)
    if kind is ActivationKind.TANH:
        t = np.tanh(b * h)
        return _out(h * (1.0 - t * t))
    return _out(np.zeros_like(h) + np.zeros_like(b))


@dataclass(frozen=True)
class LimitReport:
    beta: float
    relu_gap: float
    linear_gap: float
    n_points: int

    @property
    def relu_bound(self) -> float:
        """Analytic sup of ``|swish - relu|``: ``max_x x e^{-beta x} = 1/(e beta)``."""
        return 1.0 / (np.e * self.beta)


def limit_check(h_grid, beta) -> LimitReport:
    """Sup-norm distance of Swish from its noiseless and noise-dominated limits.

    ``relu_gap`` is ``max |swish(h, beta) - relu(h)|`` and ``linear_gap`` is
    ``max |swish(h, beta) - h/2|`` over the grid.
    """
    h = _as_field(h_grid).ravel()
    if h.size == 0:
        raise InvalidArgumentError("limit_check needs a non-empty grid")
    b = float(_as_beta(beta))
    sw = activate(ActivationKind.SWISH, h, b)
    return LimitReport(
        beta=b,
        relu_gap=float(np.max(np.abs(sw - np.maximum(h, 0.0)))),
        linear_gap=float(np.max(np.abs(sw - 0.5 * h))),
        n_points=int(h.size),
    )
