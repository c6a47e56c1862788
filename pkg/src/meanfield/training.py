"""Full-batch Adam training with checkpointed Hessian and residual diagnostics."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .activations import ActivationKind
from .config import RunConfig
from .datasets import Dataset, gen_linear, gen_nonlinear, load_digits_csv, split
from .errors import DivergenceError, InvalidArgumentError, ShapeError
from .losses import bce_loss, residual_report
from .network import (
    Network,
    accuracy,
    backward,
    beta_mask,
    column_normalize,
    flatten_grads,
    flatten_params,
    forward,
    init_network,
    make_grad_fn,
    unflatten_params,
)
from .spectrum import SpectrumReport, spectrum_at

log = logging.getLogger(__name__)

BETA_FLOOR = 1e-3


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, dim: int) -> "AdamState":
        return cls(np.zeros(dim), np.zeros(dim), 0)


def adam_step(theta, grad, state: AdamState, lr=0.01, b1=0.9, b2=0.999, eps=1e-8,
              floor_mask=None, floor=BETA_FLOOR):
    """One bias-corrected Adam update; returns ``(theta, state)`` as new objects.

    Coordinates selected by ``floor_mask`` are clipped to stay ``>= floor``.
    """
    theta = np.asarray(theta, dtype=np.float64)
    grad = np.asarray(grad, dtype=np.float64)
    if theta.shape != grad.shape or state.m.shape != theta.shape:
        raise ShapeError(f"theta {theta.shape}, grad {grad.shape}, state {state.m.shape}")
    t = state.t + 1
    m = b1 * state.m + (1.0 - b1) * grad
    v = b2 * state.v + (1.0 - b2) * grad * grad
    m_hat = m / (1.0 - b1 ** t)
    v_hat = v / (1.0 - b2 ** t)
    new = theta - lr * m_hat / (np.sqrt(v_hat) + eps)
    if floor_mask is not None:
        new = np.where(floor_mask, np.maximum(new, floor), new)
    return new, AdamState(m, v, t)


@dataclass
class TrajectoryRecord:
    epoch: int
    loss_train: float
    loss_test: float
    acc_train: float
    acc_test: float
    alpha: float
    gamma: float
    zero_residual_frac: float

    FIELDS = ("epoch", "loss_train", "loss_test", "acc_train", "acc_test",
              "alpha", "gamma", "zero_residual_frac")

    def as_row(self):
        return [getattr(self, k) for k in self.FIELDS]


@dataclass
class RunResult:
    config: RunConfig
    records: list[TrajectoryRecord]
    network: Network
    spectra: list[SpectrumReport]
    loss_history: np.ndarray
    acc_history: np.ndarray
    test_acc_history: np.ndarray
    min_hidden_act: list[float] = field(default_factory=list)
    n_train: int = 0
    n_test: int = 0

    @property
    def param_dim(self) -> int:
        return self.network.param_dim

    @property
    def final(self) -> TrajectoryRecord:
        return self.records[-1]


def load_dataset(cfg: RunConfig) -> Dataset:
    if cfg.dataset == "linear":
        return gen_linear(seed=cfg.data_seed)
    if cfg.dataset == "nonlinear":
        return gen_nonlinear(seed=cfg.data_seed)
    return load_digits_csv(cfg.digits_path, cfg.class_a, cfg.class_b)


def checkpoint_epochs(cfg: RunConfig) -> list[int]:
    epochs = list(range(cfg.checkpoint_every, cfg.epochs + 1, cfg.checkpoint_every))
    if epochs[-1] != cfg.epochs:
        epochs.append(cfg.epochs)
    return epochs


def train_run(cfg: RunConfig, data: tuple[Dataset, Dataset] | None = None) -> RunResult:
    """Train one network; deterministic given ``cfg``.

    ``data`` may supply a pre-built ``(train, test)`` pair; otherwise the
    dataset named by ``cfg`` is built and split with ``cfg.data_seed``.
    """
    if data is None:
        train, test = split(load_dataset(cfg), cfg.test_fraction, cfg.data_seed)
    else:
        train, test = data
    sizes = (train.n_features, *cfg.architecture, 1)
    net = init_network(sizes, cfg.activation, cfg.seed, cfg.beta0, cfg.beta_trainable)
    if cfg.column_normalize:
        net = column_normalize(net)
    theta = flatten_params(net)
    mask = beta_mask(net)
    state = AdamState.zeros(theta.size)
    stops = set(checkpoint_epochs(cfg))

    loss_hist = np.empty(cfg.epochs)
    acc_hist = np.empty(cfg.epochs)
    test_acc_hist = np.empty(cfg.epochs)
    records, spectra, min_acts = [], [], []
    for epoch in range(1, cfg.epochs + 1):
        cache = forward(net, train.X)
        loss = bce_loss(cache.outputs, train.y)
        if not np.isfinite(loss):
            raise DivergenceError(epoch, loss)
        loss_hist[epoch - 1] = loss
        acc_hist[epoch - 1] = accuracy(cache.outputs, train.y)
        test_acc_hist[epoch - 1] = accuracy(forward(net, test.X).outputs, test.y)
        grad = flatten_grads(net, backward(net, cache, train.y))
        theta, state = adam_step(theta, grad, state, cfg.learning_rate, cfg.adam_b1,
                                 cfg.adam_b2, cfg.adam_eps, floor_mask=mask)
        net = unflatten_params(net, theta)
        if cfg.column_normalize:
            net = column_normalize(net)
            theta = flatten_params(net)
        if epoch in stops:
            rec, spec, min_act = _checkpoint(net, train, test, cfg, epoch)
            records.append(rec)
            spectra.append(spec)
            min_acts.append(min_act)
            log.debug("epoch %d loss %.6f alpha %.3f gamma %.3f", epoch, rec.loss_train,
                      rec.alpha, rec.gamma)
    return RunResult(cfg, records, net, spectra, loss_hist, acc_hist, test_acc_hist,
                     min_acts, train.m, test.m)


def _checkpoint(net, train, test, cfg, epoch):
    cache = forward(net, train.X)
    loss_train = bce_loss(cache.outputs, train.y)
    if not np.isfinite(loss_train):
        raise DivergenceError(epoch, loss_train)
    test_out = forward(net, test.X).outputs
    resid = residual_report(cache.outputs, train.y, cfg.residual_tol)
    spec = spectrum_at(make_grad_fn(net, train.X, train.y), flatten_params(net),
                       cfg.zero_tol_rel, epoch)
    hidden = cache.acts[:-1]
    min_act = float(min(a.min() for a in hidden)) if hidden else float("nan")
    rec = TrajectoryRecord(
        epoch=epoch,
        loss_train=loss_train,
        loss_test=bce_loss(test_out, test.y),
        acc_train=accuracy(cache.outputs, train.y),
        acc_test=accuracy(test_out, test.y),
        alpha=spec.alpha,
        gamma=spec.gamma,
        zero_residual_frac=resid.zero_fraction,
    )
    return rec, spec, min_act


def _first_epoch(mask: np.ndarray):
    idx = np.flatnonzero(mask)
    return int(idx[0]) + 1 if idx.size else None


def _median(values):
    vals = [v for v in values if v is not None]
    return float(np.median(vals)) if vals else None


def _comparable(cfg: RunConfig) -> dict:
    d = cfg.to_dict()
    for key in ("activation", "seed", "output_dir"):
        d.pop(key)
    return d


def _run_cell(cfg: RunConfig) -> RunResult:
    return train_run(cfg)


def compare_runs(configs, seeds, loss_threshold: float = 0.1, workers: int = 1,
                 keep_results: bool = False):
    """Train every ``(config, seed)`` cell and summarise per activation.

    Configs must agree on everything but ``activation``/``seed``/``output_dir``.
    Returns the JSON-ready summary dict; with ``keep_results`` also the
    ``{(activation, seed): RunResult}`` mapping.
    """
    configs = list(configs)
    seeds = [int(s) for s in seeds]
    if len(configs) < 2 or not seeds:
        raise InvalidArgumentError("need at least two configs and one seed")
    base = _comparable(configs[0])
    for cfg in configs[1:]:
        if _comparable(cfg) != base:
            diff = sorted(k for k, v in _comparable(cfg).items() if base[k] != v)
            raise InvalidArgumentError(f"configs differ beyond activation: {diff}")
    kinds = [cfg.activation for cfg in configs]
    if len(set(kinds)) != len(kinds):
        raise InvalidArgumentError("duplicate activation in compare set")

    cells = [(cfg.activation, s, cfg.replace(seed=s)) for cfg in configs for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outs = list(pool.map(_run_cell, [c for _, _, c in cells]))
    else:
        outs = [_run_cell(c) for _, _, c in cells]
    results = {(k, s): r for (k, s, _), r in zip(cells, outs)}

    summary = {
        "dataset": base["dataset"],
        "architecture": base["architecture"],
        "seeds": seeds,
        "loss_threshold": loss_threshold,
        "activations": {},
    }
    for kind in kinds:
        runs = [results[(kind, s)] for s in seeds]
        per_seed = {
            "final_loss": [r.final.loss_train for r in runs],
            "final_acc_train": [r.final.acc_train for r in runs],
            "final_acc_test": [r.final.acc_test for r in runs],
            "epochs_to_loss_threshold": [_first_epoch(r.loss_history <= loss_threshold) for r in runs],
            "epochs_to_full_accuracy": [_first_epoch(r.acc_history >= 1.0) for r in runs],
            "final_alpha": [r.final.alpha for r in runs],
            "final_gamma": [r.final.gamma for r in runs],
            "gamma_positive_all_checkpoints": [all(rec.gamma > 0 for rec in r.records) for r in runs],
            "zero_residual_frac": [r.final.zero_residual_frac for r in runs],
            "eig_spread": [r.spectra[-1].spread for r in runs],
        }
        entry = {k: v for k, v in per_seed.items()}
        for key in ("final_loss", "epochs_to_loss_threshold", "epochs_to_full_accuracy",
                    "final_alpha", "final_gamma", "zero_residual_frac", "eig_spread"):
            entry["median_" + key] = _median(per_seed[key])
        summary["activations"][ActivationKind.parse(kind).value] = entry
    return (summary, results) if keep_results else summary
