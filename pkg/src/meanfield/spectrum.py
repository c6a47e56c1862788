"""Finite-difference Hessians, Jacobi diagonalization and spectral indices."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, EvaluationError, InvalidArgumentError

log = logging.getLogger(__name__)

MAX_HESSIAN_DIM = 2000
# cube root of float64 machine epsilon
FD_STEP = 6.0e-6
# above this dimension cyclic Jacobi is too slow in numpy; LAPACK takes over
JACOBI_MAX_DIM = 256


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    alpha: float
    gamma: float
    zero_tol: float
    checkpoint_epoch: int = 0
    asymmetry: float = field(default=float("nan"))

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def positive_fraction(self) -> float:
        return 1.0 - self.alpha - self.gamma

    @property
    def spread(self) -> float:
        """Sample standard deviation of the eigenvalues."""
        return float(np.std(self.eigenvalues, ddof=1)) if self.dim > 1 else 0.0


def hessian_fd(grad_fn, theta, return_asymmetry: bool = False):
    """Hessian by central differences of an analytic gradient.

    Column ``i`` is ``(g(theta + h_i e_i) - g(theta - h_i e_i)) / (2 h_i)`` with
    ``h_i = FD_STEP * max(1, |theta_i|)``; the result is symmetrized.
    """
    theta = np.asarray(theta, dtype=np.float64).ravel()
    d = theta.size
    if d > MAX_HESSIAN_DIM:
        raise InvalidArgumentError(f"parameter dimension {d} exceeds {MAX_HESSIAN_DIM}")
    if not np.all(np.isfinite(theta)):
        raise InvalidArgumentError("theta contains non-finite values")
    H = np.empty((d, d))
    probe = theta.copy()
    for i in range(d):
        step = FD_STEP * max(1.0, abs(theta[i]))
        probe[i] = theta[i] + step
        g_plus = np.asarray(grad_fn(probe), dtype=np.float64)
        probe[i] = theta[i] - step
        g_minus = np.asarray(grad_fn(probe), dtype=np.float64)
        probe[i] = theta[i]
        if not (np.all(np.isfinite(g_plus)) and np.all(np.isfinite(g_minus))):
            raise EvaluationError(f"non-finite gradient while probing coordinate {i}")
        H[:, i] = (g_plus - g_minus) / (2.0 * step)
    asym = float(np.max(np.abs(H - H.T))) if d else 0.0
    bound = 1e-4 * (1.0 + (float(np.max(np.abs(H))) if d else 0.0))
    if asym > bound:
        log.warning("finite-difference Hessian asymmetry %.3e exceeds %.3e", asym, bound)
    H = 0.5 * (H + H.T)
    return (H, asym) if return_asymmetry else H


def _round_robin(n: int):
    """Pairings of ``range(n)`` (``n`` even) so every pair meets once per sweep."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        p = np.array([players[i] for i in range(n // 2)])
        q = np.array([players[n - 1 - i] for i in range(n // 2)])
        lo, hi = np.minimum(p, q), np.maximum(p, q)
        rounds.append((lo, hi))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_norm(A):
    off = A - np.diag(np.diag(A))
    return float(np.sqrt(np.sum(off * off)))


def check_symmetric(H, rtol: float = 1e-10) -> np.ndarray:
    H = np.asarray(H, dtype=np.float64)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {H.shape}")
    scale = float(np.max(np.abs(H))) if H.size else 0.0
    if H.size and float(np.max(np.abs(H - H.T))) > rtol * max(scale, np.finfo(float).tiny):
        raise InvalidArgumentError("matrix is not symmetric")
    return H


# below this size a dense rotation product beats fancy-indexed updates
_DENSE_ROTATION_MAX = 96


def _rotate(A, V, p, q, c, s):
    """Apply the plane rotations ``(p[k], q[k], c[k], s[k])``: ``A <- G^T A G``, ``V <- V G``."""
    if A.shape[0] <= _DENSE_ROTATION_MAX:
        G = np.eye(A.shape[0])
        G[p, p] = c
        G[q, q] = c
        G[p, q] = s
        G[q, p] = -s
        A = G.T @ A @ G
        V = V @ G
    else:
        Ap, Aq = A[:, p], A[:, q]
        A[:, p], A[:, q] = c * Ap - s * Aq, s * Ap + c * Aq
        Ap, Aq = A[p, :], A[q, :]
        A[p, :] = c[:, None] * Ap - s[:, None] * Aq
        A[q, :] = s[:, None] * Ap + c[:, None] * Aq
        Vp, Vq = V[:, p], V[:, q]
        V[:, p], V[:, q] = c * Vp - s * Vq, s * Vp + c * Vq
    A[p, q] = 0.0
    A[q, p] = 0.0
    return A, V


def jacobi_eigh(H, tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic Jacobi diagonalization with round-robin (parallel) ordering.

    Each round rotates ``n/2`` disjoint index pairs at once.  Returns the
    eigenvalues (unsorted, in diagonal order) and the accumulated rotation
    matrix ``Q`` with ``H = Q diag(w) Q^T``.
    """
    A = check_symmetric(H).copy()
    n = A.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    # pad to even size with a decoupled zero row/column
    size = n + (n % 2)
    if size != n:
        A = np.pad(A, ((0, 1), (0, 1)))
    V = np.eye(size)
    target = tol * float(np.sqrt(np.sum(A * A)))
    rounds = _round_robin(size) if size > 1 else []
    off = _off_norm(A)
    sweeps = 0
    while off > target:
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", off)
        for p, q in rounds:
            apq = A[p, q]
            active = apq != 0.0
            if not active.all():
                if not active.any():
                    continue
                p, q, apq = p[active], q[active], apq[active]
            theta = (A[q, q] - A[p, p]) / (2.0 * apq)
            # hypot avoids overflowing theta**2 for nearly-diagonal pairs
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            A, V = _rotate(A, V, p, q, c, s)
        sweeps += 1
        off = _off_norm(A)
    return np.diag(A)[:n].copy(), V[:n, :n].copy()


def eigenvalues_symmetric(H, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Ascending eigenvalues of a symmetric matrix.

    Jacobi up to ``JACOBI_MAX_DIM``; larger matrices go to LAPACK ``eigvalsh``.
    """
    H = check_symmetric(H)
    if H.shape[0] > JACOBI_MAX_DIM:
        return np.linalg.eigvalsh(0.5 * (H + H.T))
    w, _ = jacobi_eigh(H, tol=tol, max_sweeps=max_sweeps)
    return np.sort(w)


def spectral_indices(eigs, zero_tol_rel: float = 1e-6, checkpoint_epoch: int = 0) -> SpectrumReport:
    """Fractions of negative (alpha) and near-zero (gamma) eigenvalues."""
    eigs = np.sort(np.asarray(eigs, dtype=np.float64).ravel())
    if eigs.size == 0:
        raise InvalidArgumentError("empty spectrum")
    zero_tol = zero_tol_rel * max(1.0, float(np.max(np.abs(eigs))))
    d = eigs.size
    alpha = np.count_nonzero(eigs < -zero_tol) / d
    gamma = np.count_nonzero(np.abs(eigs) <= zero_tol) / d
    return SpectrumReport(eigs, float(alpha), float(gamma), float(zero_tol), int(checkpoint_epoch))


def eig_histogram(eigs, n_bins: int):
    """Equal-width histogram over ``[min, max]``; a constant spectrum gets one bin."""
    if n_bins < 1:
        raise InvalidArgumentError("n_bins must be >= 1")
    eigs = np.asarray(eigs, dtype=np.float64).ravel()
    if eigs.size == 0:
        raise InvalidArgumentError("empty spectrum")
    lo, hi = float(eigs.min()), float(eigs.max())
    if lo == hi:
        return np.array([lo, hi]), np.array([eigs.size])
    counts, edges = np.histogram(eigs, bins=n_bins, range=(lo, hi))
    return edges, counts


def spectrum_at(grad_fn, theta, zero_tol_rel: float = 1e-6, checkpoint_epoch: int = 0) -> SpectrumReport:
    H, asym = hessian_fd(grad_fn, theta, return_asymmetry=True)
    report = spectral_indices(eigenvalues_symmetric(H), zero_tol_rel, checkpoint_epoch)
    report.asymmetry = asym
    return report
