"""Self-check suites behind the ``verify`` CLI subcommand."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import activations as act
from .activations import ActivationKind
from .losses import bce_loss, bernoulli_nll_oracle, saddle_point_lambda
from .network import backward, flatten_grads, flatten_params, forward, init_network, unflatten_params
from .oracles import det_by_elimination, fd_gradient, rel_err
from .spectrum import eigenvalues_symmetric, hessian_fd, jacobi_eigh


@dataclass
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def check_mean_field_identities(n_h: int = 100, n_beta: int = 10) -> Check:
    h = np.linspace(-5.0, 5.0, n_h)[:, None]
    beta = np.logspace(-1, 1, n_beta)[None, :]
    step = 6e-6
    gate_fd = (act.log_partition(h + step, beta) - act.log_partition(h - step, beta)) / (2 * step) / beta
    db = step * beta
    swish_fd = (act.log_partition(h, beta + db) - act.log_partition(h, beta - db)) / (2 * db)
    e1 = float(rel_err(act.expected_gate(h, beta), gate_fd).max())
    e2 = float(rel_err(act.activate("swish", h, beta), swish_fd).max())
    return Check("mean-field identities", max(e1, e2) <= 1e-6,
                 f"gate err {e1:.2e}, swish err {e2:.2e} (tol 1e-6)")


def check_relu_limit() -> Check:
    h = np.arange(-10.0, 10.0 + 1e-9, 0.01)
    worst = max(act.limit_check(h, b).relu_gap - 1.0 / (np.e * b) for b in (10.0, 100.0, 1000.0))
    return Check("ReLU limit", worst <= 1e-9, f"max(gap - 1/(e beta)) = {worst:.2e}")


def check_backprop(n_instances: int = 10, seed: int = 0) -> Check:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(n_instances):
        kind = list(ActivationKind)[i % len(ActivationKind)]
        net = init_network([3, 5, 2, 1], kind, seed=i, beta0=float(rng.uniform(0.5, 2.0)))
        net.betas = rng.uniform(0.5, 2.0, net.n_layers)
        net.biases = [rng.normal(0.0, 0.5, b.shape) for b in net.biases]
        X = rng.standard_normal((6, 3))
        Y = (rng.random(6) > 0.5).astype(float)
        theta = flatten_params(net)
        g = flatten_grads(net, backward(net, forward(net, X), Y))
        fd = fd_gradient(lambda t: bce_loss(forward(unflatten_params(net, t), X).outputs, Y), theta)
        worst = max(worst, float(rel_err(g, fd).max()))
    return Check("backprop vs finite differences", worst <= 1e-5, f"max rel err {worst:.2e} (tol 1e-5)")


def check_cross_entropy_identities(seed: int = 0) -> Check:
    rng = np.random.default_rng(seed)
    worst_nll = 0.0
    for _ in range(200):
        m = int(rng.integers(1, 40))
        q = rng.uniform(0.01, 0.99, m)
        y = (rng.random(m) > 0.5).astype(float)
        worst_nll = max(worst_nll, abs(bce_loss(q, y) - bernoulli_nll_oracle(q, y)))
    grid = np.linspace(0.05, 0.95, 19)
    worst_lam = max(abs(saddle_point_lambda(y, q) - saddle_point_lambda(y, q, method="bisect"))
                    for y in grid for q in grid)
    ok = worst_nll <= 1e-12 and worst_lam <= 1e-8
    return Check("cross-entropy saddle point", ok,
                 f"bce vs Bernoulli product {worst_nll:.1e}, lambda closed vs bisection {worst_lam:.1e}")


def check_eigen(seed: int = 0) -> Check:
    rng = np.random.default_rng(seed)
    A = np.array([[2.0, 1.0], [1.0, 3.0]])
    H = hessian_fd(lambda t: A @ t, rng.standard_normal(2))
    e_hess = float(np.max(np.abs(H - A)))
    e_trace = e_det = e_rec = 0.0
    for n in range(2, 11):
        S = rng.standard_normal((n, n))
        S = S + S.T
        w = eigenvalues_symmetric(S)
        e_trace = max(e_trace, abs(w.sum() - np.trace(S)) / max(1.0, abs(np.trace(S))))
        det = det_by_elimination(S)
        e_det = max(e_det, abs(np.prod(w) - det) / max(1e-300, abs(det)))
        lam, Q = jacobi_eigh(S)
        e_rec = max(e_rec, float(np.linalg.norm(Q @ np.diag(lam) @ Q.T - S) / np.linalg.norm(S)))
    ok = e_hess <= 1e-6 and e_trace <= 1e-10 and e_det <= 1e-8 and e_rec <= 1e-8
    return Check("Hessian and eigensolver", ok,
                 f"quadratic {e_hess:.1e}, trace {e_trace:.1e}, det {e_det:.1e}, reconstruction {e_rec:.1e}")


def run_all() -> list[Check]:
    return [
        check_mean_field_identities(),
        check_relu_limit(),
        check_backprop(),
        check_cross_entropy_identities(),
        check_eigen(),
    ]
