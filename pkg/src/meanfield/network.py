"""Dense feed-forward binary classifier with trainable per-layer noise.

Parameters per layer ``l`` are a weight matrix ``W_l`` of shape
``(n_l, n_{l-1})``, a bias vector ``b_l`` and a scalar ``beta_l``.  Hidden
layers apply one :class:`ActivationKind`; the single output unit is always
``sigmoid(beta_L * h_L)``.

Flat parameter ordering (tag ``ORDERING_VERSION``): for each layer in order,
``W_l`` row-major followed by ``b_l``; then, if ``beta_trainable``, the ``L``
betas.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .activations import ActivationKind, activate, activate_dbeta, activate_dh, sigmoid
from .errors import DegenerateColumnError, InvalidArgumentError, ShapeError
from .losses import EPS_CLAMP

ORDERING_VERSION = "layer-major/W-row-major/b/betas-last:v1"


@dataclass
class Network:
    layer_sizes: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    betas: np.ndarray
    hidden_kind: ActivationKind = ActivationKind.SWISH
    beta_trainable: bool = True

    def __post_init__(self):
        self.layer_sizes = tuple(int(n) for n in self.layer_sizes)
        self.hidden_kind = ActivationKind.parse(self.hidden_kind)
        self.betas = np.asarray(self.betas, dtype=np.float64)
        _check_sizes(self.layer_sizes)
        L = self.n_layers
        if len(self.weights) != L or len(self.biases) != L or self.betas.shape != (L,):
            raise ShapeError(f"expected {L} layers of parameters")
        for l in range(L):
            n_out, n_in = self.layer_sizes[l + 1], self.layer_sizes[l]
            if self.weights[l].shape != (n_out, n_in):
                raise ShapeError(f"layer {l} weights {self.weights[l].shape} != {(n_out, n_in)}")
            if self.biases[l].shape != (n_out,):
                raise ShapeError(f"layer {l} biases {self.biases[l].shape} != {(n_out,)}")
        if np.any(self.betas <= 0):
            raise InvalidArgumentError("all betas must be > 0")

    @property
    def n_layers(self) -> int:
        return len(self.layer_sizes) - 1

    @property
    def param_dim(self) -> int:
        n = sum(w.size + b.size for w, b in zip(self.weights, self.biases))
        return n + (self.n_layers if self.beta_trainable else 0)

    def copy(self) -> "Network":
        return replace(
            self,
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            betas=self.betas.copy(),
        )


@dataclass
class ForwardCache:
    inputs: np.ndarray
    preacts: list[np.ndarray]
    acts: list[np.ndarray]
    outputs: np.ndarray
    # ReLU on/off pattern per hidden layer (None for other activations)
    gates: list[np.ndarray] | None = None


@dataclass
class Gradients:
    d_weights: list[np.ndarray]
    d_biases: list[np.ndarray]
    d_betas: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _check_sizes(sizes):
    if len(sizes) < 2 or any(n < 1 for n in sizes):
        raise InvalidArgumentError(f"invalid layer sizes {sizes!r}")
    if sizes[-1] != 1:
        raise InvalidArgumentError("the output layer must have exactly one unit")


def init_network(layer_sizes, hidden_kind=ActivationKind.SWISH, seed: int = 0,
                 beta0: float = 1.0, beta_trainable: bool = True) -> Network:
    """Gaussian weights with std ``1/sqrt(fan_in)``, zero biases, all betas ``beta0``."""
    sizes = tuple(int(n) for n in layer_sizes)
    _check_sizes(sizes)
    if not np.isfinite(beta0) or beta0 <= 0:
        raise InvalidArgumentError(f"beta0 must be > 0, got {beta0!r}")
    rng = np.random.default_rng(seed)
    weights = [rng.standard_normal((n_out, n_in)) / np.sqrt(n_in)
               for n_in, n_out in zip(sizes[:-1], sizes[1:])]
    biases = [np.zeros(n) for n in sizes[1:]]
    return Network(sizes, weights, biases, np.full(len(sizes) - 1, float(beta0)),
                   ActivationKind.parse(hidden_kind), beta_trainable)


def forward(net: Network, X, gates=None) -> ForwardCache:
    """Forward pass caching every pre-activation and activation.

    ``gates`` optionally pins the ReLU on/off pattern of each hidden layer
    (used to differentiate within one linear region of a ReLU network).
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != net.layer_sizes[0]:
        raise ShapeError(f"input shape {X.shape} does not match {net.layer_sizes[0]} features")
    relu = net.hidden_kind is ActivationKind.RELU
    preacts, acts, used_gates = [], [], []
    a = X
    L = net.n_layers
    for l in range(L):
        h = a @ net.weights[l].T + net.biases[l]
        if l < L - 1 and relu:
            gate = gates[l] if gates is not None else h > 0
            used_gates.append(gate)
            a = np.where(gate, h, 0.0)
        elif l < L - 1:
            a = activate(net.hidden_kind, h, net.betas[l])
        else:
            a = sigmoid(net.betas[l] * h)
        preacts.append(h)
        acts.append(a)
    y_hat = np.clip(acts[-1][:, 0], EPS_CLAMP, 1.0 - EPS_CLAMP)
    return ForwardCache(X, preacts, acts, y_hat, used_gates if relu else None)


def backward(net: Network, cache: ForwardCache, Y) -> Gradients:
    """Gradients of the mean binary cross-entropy over the batch.

    The output residual is ``y_hat - y``; for a ``beta_L``-scaled sigmoid head
    the error signal on ``h_L`` is ``beta_L * (y_hat - y) / m``.
    """
    Y = np.asarray(Y, dtype=np.float64).ravel()
    m = cache.outputs.shape[0]
    if Y.shape[0] != m:
        raise ShapeError(f"{Y.shape[0]} labels for a batch of {m}")
    L = net.n_layers
    d_w = [None] * L
    d_b = [None] * L
    d_beta = np.zeros(L)

    resid = ((cache.outputs - Y) / m)[:, None]
    h_out = cache.preacts[-1]
    d_beta[-1] = np.sum(resid * h_out)
    delta = net.betas[-1] * resid
    for l in range(L - 1, -1, -1):
        a_prev = cache.acts[l - 1] if l > 0 else cache.inputs
        d_w[l] = delta.T @ a_prev
        d_b[l] = delta.sum(axis=0)
        if l == 0:
            break
        d_a = delta @ net.weights[l]
        h = cache.preacts[l - 1]
        if net.hidden_kind.depends_on_beta:
            d_beta[l - 1] = np.sum(d_a * activate_dbeta(net.hidden_kind, h, net.betas[l - 1]))
        if cache.gates is not None:
            delta = np.where(cache.gates[l - 1], d_a, 0.0)
        else:
            delta = d_a * activate_dh(net.hidden_kind, h, net.betas[l - 1])
    if not net.beta_trainable:
        d_beta[:] = 0.0
    return Gradients(d_w, d_b, d_beta)


def flatten_params(net: Network) -> np.ndarray:
    parts = []
    for w, b in zip(net.weights, net.biases):
        parts += [w.ravel(), b]
    if net.beta_trainable:
        parts.append(net.betas)
    return np.concatenate(parts)


def flatten_grads(net: Network, grads: Gradients) -> np.ndarray:
    parts = []
    for w, b in zip(grads.d_weights, grads.d_biases):
        parts += [w.ravel(), b]
    if net.beta_trainable:
        parts.append(grads.d_betas)
    return np.concatenate(parts)


def unflatten_params(net: Network, theta) -> Network:
    """New network with ``net``'s structure and parameters taken from ``theta``."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim != 1 or theta.size != net.param_dim:
        raise ShapeError(f"flat vector of length {theta.size}, expected {net.param_dim}")
    weights, biases = [], []
    i = 0
    for w, b in zip(net.weights, net.biases):
        weights.append(theta[i:i + w.size].reshape(w.shape).copy())
        i += w.size
        biases.append(theta[i:i + b.size].copy())
        i += b.size
    betas = theta[i:].copy() if net.beta_trainable else net.betas.copy()
    return replace(net, weights=weights, biases=biases, betas=betas)


def beta_mask(net: Network) -> np.ndarray:
    """Boolean mask of the beta coordinates in the flat vector."""
    mask = np.zeros(net.param_dim, dtype=bool)
    if net.beta_trainable:
        mask[-net.n_layers:] = True
    return mask


def loss_and_grad(net: Network, X, Y):
    from .losses import bce_loss

    cache = forward(net, X)
    return bce_loss(cache.outputs, Y), backward(net, cache, Y)


def make_grad_fn(net: Network, X, Y, freeze_gates: bool | None = None):
    """``theta -> flat gradient`` of the batch loss, for Hessian probing.

    For ReLU networks the gate pattern is frozen at ``net`` by default, so
    finite differences of the gradient never straddle a kink and return the
    Hessian of the linear region containing ``net``.
    """
    if freeze_gates is None:
        freeze_gates = net.hidden_kind is ActivationKind.RELU
    gates = forward(net, X).gates if freeze_gates else None

    def grad_fn(theta):
        probe = unflatten_params(net, theta)
        cache = forward(probe, X, gates)
        return flatten_grads(probe, backward(probe, cache, Y))

    return grad_fn


def column_normalize(net: Network, tol: float = 1e-12) -> Network:
    """Rescale every weight column so that ``sum_i W_l[i, j] == 1``."""
    weights = []
    for l, w in enumerate(net.weights):
        sums = w.sum(axis=0)
        bad = np.flatnonzero(np.abs(sums) <= tol)
        if bad.size:
            raise DegenerateColumnError(l, int(bad[0]), float(sums[bad[0]]))
        weights.append(w / sums)
    return replace(net, weights=weights, biases=[b.copy() for b in net.biases],
                   betas=net.betas.copy())


def predict_accuracy(net: Network, X, Y, threshold: float = 0.5) -> float:
    Y = np.asarray(Y).ravel()
    y_hat = forward(net, X).outputs
    if Y.shape != y_hat.shape:
        raise ShapeError(f"{Y.shape[0]} labels for {y_hat.shape[0]} examples")
    return accuracy(y_hat, Y, threshold)


def accuracy(y_hat, y, threshold: float = 0.5) -> float:
    """Fraction of examples where ``(y_hat >= threshold)`` equals the label."""
    y_hat = np.asarray(y_hat).ravel()
    y = np.asarray(y).ravel()
    if y_hat.shape != y.shape:
        raise ShapeError("prediction/label length mismatch")
    return float(np.mean((y_hat >= threshold) == (y >= 0.5)))
