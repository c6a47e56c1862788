"""Shared plumbing for the experiment scripts."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from meanfield.config import RunConfig  # noqa: E402
from meanfield.outputs import emit_outputs  # noqa: E402
from meanfield.plots import line_chart_svg, write_svg  # noqa: E402
from meanfield.training import compare_runs  # noqa: E402


def parse_args(description: str, out_default: str, epochs_default: int):
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--seeds", type=int, default=10, help="number of seeds, starting at 0")
    p.add_argument("--epochs", type=int, default=epochs_default)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--frozen-beta", action="store_true", help="keep beta fixed at 1")
    p.add_argument("--out", default=out_default)
    args = p.parse_args()
    logging.basicConfig(level=logging.ERROR)
    return args


def sweep(args, dataset: str, kinds, **cfg_kw):
    configs = [RunConfig(dataset=dataset, activation=k, epochs=args.epochs,
                         beta_trainable=not args.frozen_beta, **cfg_kw) for k in kinds]
    summary, results = compare_runs(configs, range(args.seeds), workers=args.workers,
                                    keep_results=True)
    out = Path(args.out)
    for (kind, seed), res in results.items():
        emit_outputs(res, out / f"{kind.value}-seed{seed}")
    (out / "compare.json").write_text(json.dumps(summary, indent=2) + "\n")
    return summary, results, out


def seed_median_curves(results, kinds, n_seeds, attr):
    """Per activation, the median over seeds of a per-checkpoint attribute."""
    curves = []
    for kind in kinds:
        runs = [results[(kind, s)] for s in range(n_seeds)]
        epochs = [r.epoch for r in runs[0].records]
        vals = np.median([[getattr(r, attr) for r in run.records] for run in runs], axis=0)
        curves.append((kind.value, epochs, vals.tolist()))
    return curves


def loss_curves(results, kinds, n_seeds, stride: int = 10):
    curves = []
    for kind in kinds:
        hist = np.median([results[(kind, s)].loss_history for s in range(n_seeds)], axis=0)
        epochs = np.arange(1, hist.size + 1)[::stride]
        curves.append((kind.value, epochs.tolist(), np.log10(hist[::stride]).tolist()))
    return curves


def save_chart(path: Path, series, title, y_label):
    write_svg(path, line_chart_svg(series, title=title, x_label="epoch", y_label=y_label))


def print_table(summary):
    keys = ["median_final_loss", "median_final_alpha", "median_final_gamma",
            "median_zero_residual_frac", "median_eig_spread"]
    print(f"{'activation':10s} " + " ".join(f"{k[7:]:>20s}" for k in keys))
    for kind, entry in summary["activations"].items():
        print(f"{kind:10s} " + " ".join(f"{entry[k]:20.4g}" for k in keys))
