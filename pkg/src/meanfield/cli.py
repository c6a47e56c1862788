"""Command-line entry point: ``meanfield <subcommand> ...``.

Exit codes: 0 success, 1 validation/usage failure, 2 runtime error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .activations import limit_check
from .datasets import gen_linear, gen_nonlinear, load_digits_csv, split, write_csv
from .errors import ConfigError, InvalidArgumentError, MeanFieldError
from .network import flatten_params, make_grad_fn
from .outputs import emit_outputs, network_from_json, write_spectrum_csv
from .spectrum import spectrum_at
from .training import compare_runs, load_dataset, train_run

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2

log = logging.getLogger("meanfield")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_config_flags(p):
    p.add_argument("--config", help="flat key = value file; keys are RunConfig fields")
    group = p.add_argument_group("RunConfig overrides")
    for key in cfgmod.field_names():
        flags = {f"--{key}", f"--{key.replace('_', '-')}"}
        group.add_argument(*sorted(flags), dest=f"cfg__{key}", metavar="VALUE",
                           default=None)


def _config_from(args) -> cfgmod.RunConfig:
    overrides = {k[5:]: v for k, v in vars(args).items() if k.startswith("cfg__") and v is not None}
    return cfgmod.build_config(args.config, overrides)


def _default_dir(cfg) -> str:
    return cfg.output_dir or f"runs/{cfg.dataset}-{cfg.activation.value}-seed{cfg.seed}"


def _parse_seeds(text: str) -> list[int]:
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        elif part:
            seeds.append(int(part))
    return seeds


def cmd_gen_data(args) -> int:
    if args.dataset == "linear":
        ds = gen_linear(args.m or 51, args.seed, args.margin)
    elif args.dataset == "nonlinear":
        ds = gen_nonlinear(args.m or 863, args.seed, args.noise)
    else:
        ds = load_digits_csv(args.digits_path, args.class_a, args.class_b)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_csv(ds, args.out)
    print(f"wrote {ds.m} rows ({ds.name}, seed={args.seed}) to {args.out}")
    return EXIT_OK


def cmd_train(args) -> int:
    cfg = _config_from(args)
    out_dir = _default_dir(cfg)
    result = train_run(cfg)
    emit_outputs(result, out_dir, svg=not args.no_svg)
    f = result.final
    print(f"seed={cfg.seed} activation={cfg.activation.value} dataset={cfg.dataset} "
          f"epochs={f.epoch} loss_train={f.loss_train:.6g} acc_train={f.acc_train:.4f} "
          f"acc_test={f.acc_test:.4f} alpha={f.alpha:.4f} gamma={f.gamma:.4f} -> {out_dir}")
    return EXIT_OK


def cmd_compare(args) -> int:
    base = _config_from(args)
    acts = [a.strip() for a in args.activations.split(",") if a.strip()]
    seeds = _parse_seeds(args.seeds)
    root = Path(base.output_dir or f"runs/compare-{base.dataset}")
    configs = [base.replace(activation=a) for a in acts]
    summary, results = compare_runs(configs, seeds, args.loss_threshold, args.workers,
                                    keep_results=True)
    for (kind, seed), result in results.items():
        emit_outputs(result, root / f"{kind.value}-seed{seed}", svg=not args.no_svg)
    root.mkdir(parents=True, exist_ok=True)
    (root / "compare.json").write_text(json.dumps(summary, indent=2) + "\n")
    for kind, entry in summary["activations"].items():
        print(f"{kind:8s} median_final_loss={entry['median_final_loss']:.4g} "
              f"median_zero_residual={entry['median_zero_residual_frac']:.3f} "
              f"median_gamma={entry['median_final_gamma']:.3f} "
              f"median_eig_spread={entry['median_eig_spread']:.3g}")
    print(f"seeds={seeds} summary -> {root / 'compare.json'}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    ckpt = json.loads(Path(args.checkpoint).read_text())
    cfg = cfgmod.RunConfig(**{k: (tuple(v) if isinstance(v, list) else v)
                              for k, v in ckpt["config"].items()})
    net = network_from_json(ckpt["network"])
    train, _ = split(load_dataset(cfg), cfg.test_fraction, cfg.data_seed)
    zero_tol_rel = args.zero_tol_rel if args.zero_tol_rel is not None else cfg.zero_tol_rel
    report = spectrum_at(make_grad_fn(net, train.X, train.y), flatten_params(net),
                         zero_tol_rel, ckpt.get("epoch", 0))
    if args.out:
        write_spectrum_csv([report], args.out)
    print(f"seed={cfg.seed} epoch={report.checkpoint_epoch} dim={report.dim} "
          f"alpha={report.alpha:.4f} gamma={report.gamma:.4f} spread={report.spread:.6g} "
          f"min={report.eigenvalues[0]:.6g} max={report.eigenvalues[-1]:.6g}")
    return EXIT_OK


def cmd_limits(args) -> int:
    h = np.arange(args.h_min, args.h_max + 0.5 * args.step, args.step)
    print(f"{'beta':>10s} {'relu_gap':>12s} {'1/(e*beta)':>12s} {'linear_gap':>12s} {'beta*h^2/4':>12s}")
    ok = True
    for beta in args.beta:
        r = limit_check(h, beta)
        lin_bound = beta * float(np.max(np.abs(h))) ** 2 / 4
        ok &= r.relu_gap <= r.relu_bound + 1e-9
        print(f"{beta:10.4g} {r.relu_gap:12.4e} {r.relu_bound:12.4e} {r.linear_gap:12.4e} {lin_bound:12.4e}")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_verify(args) -> int:
    from .verify import run_all

    checks = run_all()
    for c in checks:
        print(c.line())
    return EXIT_OK if all(c.passed for c in checks) else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="meanfield", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen-data", help="write a dataset as features...,label CSV")
    g.add_argument("--dataset", choices=cfgmod.DATASETS, default="nonlinear")
    g.add_argument("--out", required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--m", type=int, default=None)
    g.add_argument("--margin", type=float, default=0.2)
    g.add_argument("--noise", type=float, default=0.05)
    g.add_argument("--digits-path", default="data/digits.csv")
    g.add_argument("--class-a", type=int, default=0)
    g.add_argument("--class-b", type=int, default=1)
    g.set_defaults(func=cmd_gen_data)

    t = sub.add_parser("train", help="train one configuration")
    _add_config_flags(t)
    t.add_argument("--no-svg", action="store_true")
    t.set_defaults(func=cmd_train)

    c = sub.add_parser("compare", help="sweep activations over seeds")
    _add_config_flags(c)
    c.add_argument("--activations", default="swish,relu,sigmoid")
    c.add_argument("--seeds", default="0-9", help="e.g. 0-9 or 0,3,7")
    c.add_argument("--loss-threshold", type=float, default=0.1)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--no-svg", action="store_true")
    c.set_defaults(func=cmd_compare)

    s = sub.add_parser("spectrum", help="recompute the Hessian spectrum of a saved checkpoint")
    s.add_argument("checkpoint", help="checkpoint.json written by train")
    s.add_argument("--out", help="spectrum CSV destination")
    s.add_argument("--zero-tol-rel", type=float, default=None)
    s.set_defaults(func=cmd_spectrum)

    lim = sub.add_parser("limits", help="distance of Swish from its ReLU and linear limits")
    lim.add_argument("--beta", type=float, nargs="+", default=[1.0, 10.0, 100.0, 1000.0])
    lim.add_argument("--h-min", type=float, default=-10.0)
    lim.add_argument("--h-max", type=float, default=10.0)
    lim.add_argument("--step", type=float, default=0.01)
    lim.set_defaults(func=cmd_limits)

    v = sub.add_parser("verify", help="run the numerical oracle suites")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        print("valid config keys: " + ", ".join(cfgmod.field_names()), file=sys.stderr)
        return EXIT_INVALID
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, InvalidArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (MeanFieldError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
