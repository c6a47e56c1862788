"""Acceptance suite: one check per criterion, each printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
Criteria 6-8 train many networks and take minutes; they carry the ``slow`` marker.
"""
from __future__ import annotations

import logging
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from meanfield import activations as act
from meanfield.activations import ActivationKind
from meanfield.config import RunConfig
from meanfield.losses import bce_loss, bernoulli_nll_oracle, saddle_point_lambda
from meanfield.network import backward, flatten_grads, flatten_params, forward, init_network, unflatten_params
from meanfield.oracles import det_by_elimination, fd_gradient, rel_err
from meanfield.spectrum import eigenvalues_symmetric, hessian_fd, jacobi_eigh
from meanfield.training import compare_runs

ROOT = Path(__file__).resolve().parents[1]
DIGITS = ROOT / "data" / "digits.csv"
SEEDS = range(10)


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def criterion_1():
    def work():
        h = np.linspace(-10.0, 10.0, 100)[:, None]
        beta = np.logspace(-1, 1, 10)[None, :]
        step = 6e-6
        gate_fd = (act.log_partition(h + step, beta) - act.log_partition(h - step, beta)) / (2 * step * beta)
        db = step * beta
        swish_fd = (act.log_partition(h, beta + db) - act.log_partition(h, beta - db)) / (2 * db)
        return (float(rel_err(act.expected_gate(h, beta), gate_fd).max()),
                float(rel_err(act.activate("swish", h, beta), swish_fd).max()))

    (e_gate, e_swish), dt = _timed(work)
    ok = max(e_gate, e_swish) <= 1e-6 and dt < 1.0
    return ok, f"gate err {e_gate:.2e}, swish err {e_swish:.2e} (tol 1e-6), {dt:.3f}s"


def criterion_2():
    def work():
        h = np.linspace(-10.0, 10.0, 200_001)
        return {b: act.limit_check(h, b).relu_gap for b in (10.0, 100.0, 1000.0)}

    gaps, dt = _timed(work)
    ok = all(g <= 1 / (np.e * b) + 1e-9 for b, g in gaps.items()) and dt < 1.0
    detail = ", ".join(f"beta={b:g}: {g:.3e} <= {1 / (np.e * b):.3e}" for b, g in gaps.items())
    return ok, f"{detail}, {dt:.3f}s"


def criterion_3():
    def work():
        rng = np.random.default_rng(3)
        kinds = list(ActivationKind)
        worst = 0.0
        for i in range(100):
            n_hidden = int(rng.integers(1, 3))
            sizes = [int(rng.integers(1, 5))] + [int(rng.integers(1, c + 1)) for c in (8, 2)[:n_hidden]] + [1]
            net = init_network(sizes, kinds[i % len(kinds)], seed=i)
            net.betas = rng.uniform(0.3, 3.0, net.n_layers)
            # random biases keep ReLU pre-activations off the kink at exactly 0
            net.biases = [rng.normal(0.0, 0.5, b.shape) for b in net.biases]
            m = int(rng.integers(1, 9))
            X = rng.standard_normal((m, sizes[0]))
            Y = (rng.random(m) > 0.5).astype(float)
            g = flatten_grads(net, backward(net, forward(net, X), Y))
            fd = fd_gradient(lambda t: bce_loss(forward(unflatten_params(net, t), X).outputs, Y),
                             flatten_params(net))
            worst = max(worst, float(rel_err(g, fd).max()))
        return worst

    worst, dt = _timed(work)
    return worst <= 1e-5 and dt < 30.0, f"max rel err {worst:.2e} over 100 nets (tol 1e-5), {dt:.2f}s"


def criterion_4():
    def work():
        rng = np.random.default_rng(4)
        worst_nll = 0.0
        for _ in range(1000):
            m = int(rng.integers(1, 60))
            q = rng.uniform(1e-3, 1 - 1e-3, m)
            y = (rng.random(m) > 0.5).astype(float)
            worst_nll = max(worst_nll, abs(bce_loss(q, y) - bernoulli_nll_oracle(q, y)))
        grid = np.linspace(0.05, 0.95, 19)
        worst_lam = max(abs(saddle_point_lambda(y, q) - saddle_point_lambda(y, q, method="bisect"))
                        for y in grid for q in grid)
        return worst_nll, worst_lam

    (e_nll, e_lam), dt = _timed(work)
    ok = e_nll <= 1e-12 and e_lam <= 1e-8 and dt < 5.0
    return ok, f"bce vs product {e_nll:.1e} (tol 1e-12), lambda {e_lam:.1e} (tol 1e-8), {dt:.2f}s"


def criterion_5():
    def work():
        rng = np.random.default_rng(5)
        A = np.array([[2.0, 1.0], [1.0, 3.0]])
        e_quad = float(np.max(np.abs(hessian_fd(lambda t: A @ t, rng.standard_normal(2)) - A)))
        e_tr = e_rec = e_det = 0.0
        for n in range(1, 11):
            for _ in range(5):
                S = rng.standard_normal((n, n))
                S = S + S.T
                w = eigenvalues_symmetric(S)
                e_tr = max(e_tr, abs(w.sum() - np.trace(S)) / max(1.0, np.abs(np.diag(S)).sum()))
                lam, Q = jacobi_eigh(S)
                e_rec = max(e_rec, float(np.linalg.norm(Q @ np.diag(lam) @ Q.T - S) / np.linalg.norm(S)))
                d = det_by_elimination(S)
                e_det = max(e_det, abs(np.prod(w) - d) / max(1.0, abs(d)))
        return e_quad, e_tr, e_rec, e_det

    (e_quad, e_tr, e_rec, e_det), dt = _timed(work)
    ok = e_quad <= 1e-6 and e_tr <= 1e-10 and e_rec <= 1e-8 and dt < 5.0
    return ok, (f"quadratic {e_quad:.1e} (1e-6), trace {e_tr:.1e} (1e-10), "
                f"reconstruction {e_rec:.1e} (1e-8), det {e_det:.1e}, {dt:.2f}s")


def _compare(dataset, kinds, **kw):
    cfgs = [RunConfig(dataset=dataset, activation=k, **kw) for k in kinds]
    return compare_runs(cfgs, SEEDS)["activations"]


def criterion_6():
    s, dt = _timed(lambda: _compare("nonlinear", ("swish", "relu", "sigmoid"), architecture=(8, 2)))
    sw, re, sg = s["swish"], s["relu"], s["sigmoid"]
    a = sw["median_final_loss"] < re["median_final_loss"]
    n_b = sum(re["gamma_positive_all_checkpoints"])
    n_c = sum(z_sw >= max(z_sg, z_re) for z_sw, z_sg, z_re in
              zip(sw["zero_residual_frac"], sg["zero_residual_frac"], re["zero_residual_frac"]))
    ok = a and n_b >= 8 and n_c >= 7
    return ok, (f"(a) median loss swish {sw['median_final_loss']:.2e} < relu {re['median_final_loss']:.2e}: {a}; "
                f"(b) relu gamma>0 throughout {n_b}/10 (need 8); "
                f"(c) swish zero-residual >= others {n_c}/10 (need 7); {dt:.0f}s")


def criterion_7():
    s, dt = _timed(lambda: _compare("linear", ("sigmoid", "relu", "swish"), architecture=(10,)))
    perfect = {k: sum(a == 1.0 and b == 1.0 for a, b in zip(v["final_acc_train"], v["final_acc_test"]))
               for k, v in s.items()}
    ok = all(n >= 9 for n in perfect.values()) and dt < 60.0
    return ok, ", ".join(f"{k} {n}/10" for k, n in perfect.items()) + f" at train/test acc 1.0 (need 9), {dt:.1f}s"


def criterion_8():
    # only the end-of-training spectrum is scored, so skip intermediate Hessians
    s, dt = _timed(lambda: _compare("digits", ("swish", "relu"), architecture=(25,),
                                    digits_path=str(DIGITS), epochs=3000, checkpoint_every=3000))
    sw, re = s["swish"]["eig_spread"], s["relu"]["eig_spread"]
    wins = sum(a > b for a, b in zip(sw, re))
    return wins >= 7, (f"swish spread > relu in {wins}/10 seeds (need 7); "
                       f"median swish {np.median(sw):.2e}, relu {np.median(re):.2e}; {dt:.0f}s")


def criterion_9(tmp_dir: Path):
    from meanfield.cli import main

    args = ["train", "--config", str(ROOT / "configs" / "nonlinear_swish.cfg"), "--seed", "3",
            "--epochs", "300", "--checkpoint-every", "50", "--no-svg"]
    for run in ("a", "b"):
        if main([*args, "--output-dir", str(tmp_dir / run)]) != 0:
            return False, f"train run {run} failed"
    same = {name: (tmp_dir / "a" / name).read_bytes() == (tmp_dir / "b" / name).read_bytes()
            for name in ("trajectory.csv", "spectrum.csv")}
    return all(same.values()), ", ".join(f"{k} identical: {v}" for k, v in same.items())


def _report(capsys, n, outcome):
    passed, detail = outcome
    line = f"criterion {n}: {'PASS' if passed else 'FAIL'} | {detail}"
    with capsys.disabled():
        print("\n" + line)
    assert passed, line


@pytest.fixture(autouse=True)
def _quiet():
    logging.getLogger("meanfield").setLevel(logging.ERROR)


def test_criterion_1_mean_field_identities(capsys):
    _report(capsys, 1, criterion_1())


def test_criterion_2_relu_limit(capsys):
    _report(capsys, 2, criterion_2())


def test_criterion_3_backprop(capsys):
    _report(capsys, 3, criterion_3())


def test_criterion_4_cross_entropy_identities(capsys):
    _report(capsys, 4, criterion_4())


def test_criterion_5_hessian_machinery(capsys):
    _report(capsys, 5, criterion_5())


@pytest.mark.slow
def test_criterion_6_nonlinear_comparison(capsys):
    _report(capsys, 6, criterion_6())


@pytest.mark.slow
def test_criterion_7_linear_task(capsys):
    _report(capsys, 7, criterion_7())


@pytest.mark.slow
def test_criterion_8_digits_spread(capsys):
    _report(capsys, 8, criterion_8())


def test_criterion_9_determinism(capsys, tmp_path):
    _report(capsys, 9, criterion_9(tmp_path))


if __name__ == "__main__":
    import tempfile

    logging.getLogger("meanfield").setLevel(logging.ERROR)
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for n, fn in enumerate([criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                criterion_6, criterion_7, criterion_8,
                                lambda: criterion_9(Path(tmp))], start=1):
            passed, detail = fn()
            failures += not passed
            print(f"criterion {n}: {'PASS' if passed else 'FAIL'} | {detail}", flush=True)
    sys.exit(1 if failures else 0)
