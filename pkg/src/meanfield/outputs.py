"""Serialization of run results: CSV trajectories, spectra, summary, checkpoints."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .network import ORDERING_VERSION, Network, flatten_params
from .plots import histogram_svg, line_chart_svg, write_svg
from .spectrum import eig_histogram
from .training import RunResult, TrajectoryRecord

TRAJECTORY_HEADER = list(TrajectoryRecord.FIELDS)
SPECTRUM_HEADER = ["checkpoint_epoch", "eig_index", "eigenvalue"]


def _num(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_spectrum_csv(spectra, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SPECTRUM_HEADER)
        for spec in spectra:
            for i, lam in enumerate(spec.eigenvalues):
                w.writerow([spec.checkpoint_epoch, i, _num(lam)])


def network_to_json(net: Network) -> dict:
    return {
        "ordering": ORDERING_VERSION,
        "layer_sizes": list(net.layer_sizes),
        "hidden_kind": net.hidden_kind.value,
        "beta_trainable": net.beta_trainable,
        # betas are stored separately so frozen-beta networks round-trip
        "betas": [float(b) for b in net.betas],
        "params": [float(v) for v in flatten_params(net)],
    }


def network_from_json(d: dict) -> Network:
    from .network import init_network, unflatten_params

    if d.get("ordering") != ORDERING_VERSION:
        raise ValueError(f"unsupported parameter ordering {d.get('ordering')!r}")
    net = init_network(d["layer_sizes"], d["hidden_kind"], 0, 1.0, bool(d["beta_trainable"]))
    net.betas = np.asarray(d["betas"], dtype=np.float64)
    return unflatten_params(net, np.asarray(d["params"], dtype=np.float64))


def summary_dict(result: RunResult) -> dict:
    final = result.final
    out = dict(result.config.to_dict())
    out.update({
        "final_epoch": final.epoch,
        "final_loss_train": final.loss_train,
        "final_loss_test": final.loss_test,
        "final_acc_train": final.acc_train,
        "final_acc_test": final.acc_test,
        "final_alpha": final.alpha,
        "final_gamma": final.gamma,
        "final_zero_residual_frac": final.zero_residual_frac,
        "final_eig_spread": result.spectra[-1].spread,
        "final_betas": [float(b) for b in result.network.betas],
        "param_dim": result.param_dim,
        "n_train": result.n_train,
        "n_test": result.n_test,
    })
    return out


def emit_outputs(result: RunResult, output_dir, svg: bool = True) -> dict:
    """Write ``trajectory.csv``, ``spectrum.csv``, ``summary.json``, ``checkpoint.json``
    and optionally ``loss.svg``/``spectrum_hist.svg``.  Returns the written paths."""
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "trajectory": out / "trajectory.csv",
            "spectrum": out / "spectrum.csv",
            "summary": out / "summary.json",
            "checkpoint": out / "checkpoint.json",
        }
        with paths["trajectory"].open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(TRAJECTORY_HEADER)
            for rec in result.records:
                w.writerow([_num(v) for v in rec.as_row()])
        write_spectrum_csv(result.spectra, paths["spectrum"])
        paths["summary"].write_text(json.dumps(summary_dict(result), indent=2) + "\n")
        ckpt = {"config": result.config.to_dict(), "epoch": result.final.epoch,
                "network": network_to_json(result.network)}
        paths["checkpoint"].write_text(json.dumps(ckpt, indent=1) + "\n")
        if svg:
            paths["loss_svg"] = out / "loss.svg"
            epochs = list(range(1, len(result.loss_history) + 1))
            write_svg(paths["loss_svg"], line_chart_svg(
                [("train loss", epochs, result.loss_history.tolist()),
                 ("test loss", [r.epoch for r in result.records],
                  [r.loss_test for r in result.records])],
                title=f"{result.config.dataset} / {result.config.activation.value}",
                x_label="epoch", y_label="cross-entropy"))
            paths["hist_svg"] = out / "spectrum_hist.svg"
            edges, counts = eig_histogram(result.spectra[-1].eigenvalues, 30)
            write_svg(paths["hist_svg"], histogram_svg(
                edges, counts, title=f"Hessian spectrum, epoch {result.final.epoch}",
                x_label="eigenvalue"))
    except OSError as exc:
        raise OSError(f"failed writing outputs under {out}: {exc}") from exc
    return paths
