"""Independent numerical oracles used by ``verify`` and the test-suite.

Nothing here calls the code paths it is meant to check: derivatives come
from central differences, separability from a perceptron, determinants from
Gaussian elimination.
"""
from __future__ import annotations

import numpy as np


def rel_err(a, b) -> np.ndarray:
    """``|a - b| / max(1, |a|, |b|)``: relative error with a unit floor."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))


def central_diff(f, x, step):
    """Central difference of a scalar (or elementwise vectorised) function."""
    return (f(x + step) - f(x - step)) / (2.0 * step)


def fd_gradient(loss_fn, theta, rel_step: float = 1e-5) -> np.ndarray:
    """Coordinate-wise central differences, step ``rel_step * max(1, |theta_i|)``."""
    theta = np.asarray(theta, dtype=np.float64)
    grad = np.empty_like(theta)
    probe = theta.copy()
    for i in range(theta.size):
        h = rel_step * max(1.0, abs(theta[i]))
        probe[i] = theta[i] + h
        f_plus = loss_fn(probe)
        probe[i] = theta[i] - h
        f_minus = loss_fn(probe)
        probe[i] = theta[i]
        grad[i] = (f_plus - f_minus) / (2.0 * h)
    return grad


def det_by_elimination(A) -> float:
    """Determinant via Gaussian elimination with partial pivoting."""
    M = np.array(A, dtype=np.float64)
    n = M.shape[0]
    det = 1.0
    for k in range(n):
        piv = k + int(np.argmax(np.abs(M[k:, k])))
        if M[piv, k] == 0.0:
            return 0.0
        if piv != k:
            M[[k, piv]] = M[[piv, k]]
            det = -det
        det *= M[k, k]
        M[k + 1:, k:] -= np.outer(M[k + 1:, k] / M[k, k], M[k, k:])
    return float(det)


def perceptron_separates(X, y, max_epochs: int = 10000) -> bool:
    """True if the perceptron rule reaches zero training errors."""
    Xb = np.column_stack([X, np.ones(len(X))])
    s = np.where(np.asarray(y) > 0.5, 1.0, -1.0)
    w = np.zeros(Xb.shape[1])
    for _ in range(max_epochs):
        mistakes = 0
        for x_mu, s_mu in zip(Xb, s):
            if s_mu * (x_mu @ w) <= 0:
                w += s_mu * x_mu
                mistakes += 1
        if mistakes == 0:
            return True
    return False


def logistic_probe_accuracy(X, y, iters: int = 50, ridge: float = 1e-6) -> float:
    """Training accuracy of an (almost unregularised) logistic regression fit by Newton steps."""
    Xb = np.column_stack([X, np.ones(len(X))])
    y = np.asarray(y, dtype=np.float64)
    w = np.zeros(Xb.shape[1])
    for _ in range(iters):
        p = 1.0 / (1.0 + np.exp(-np.clip(Xb @ w, -500, 500)))
        grad = Xb.T @ (p - y) + ridge * w
        hess = (Xb * (p * (1 - p))[:, None]).T @ Xb + ridge * np.eye(len(w))
        w -= np.linalg.solve(hess, grad)
    return float(np.mean(((Xb @ w) >= 0) == (y > 0.5)))
