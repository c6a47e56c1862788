"""Two-moons task with 8-2 hidden units: loss, alpha, gamma and residual traces per activation."""
from _common import loss_curves, parse_args, print_table, save_chart, seed_median_curves, sweep

from meanfield.activations import ActivationKind

KINDS = [ActivationKind.SWISH, ActivationKind.RELU, ActivationKind.SIGMOID]


def main():
    args = parse_args(__doc__, "runs/nonlinear", 5000)
    summary, results, out = sweep(args, "nonlinear", KINDS, architecture=(8, 2))
    save_chart(out / "loss.svg", loss_curves(results, KINDS, args.seeds),
               "median train loss", "log10 cross-entropy")
    for attr in ("alpha", "gamma", "zero_residual_frac"):
        save_chart(out / f"{attr}.svg", seed_median_curves(results, KINDS, args.seeds, attr),
                   f"median {attr}", attr)
    print_table(summary)
    relu = summary["activations"]["relu"]["gamma_positive_all_checkpoints"]
    print(f"relu gamma > 0 at every checkpoint in {sum(relu)}/{len(relu)} seeds")
    print(f"outputs under {out}")


if __name__ == "__main__":
    main()
