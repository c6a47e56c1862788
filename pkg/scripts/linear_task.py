"""Separable 51-point task with a 10-unit hidden layer: accuracy and convergence speed."""
from _common import loss_curves, parse_args, print_table, save_chart, sweep

from meanfield.activations import ActivationKind

KINDS = [ActivationKind.SIGMOID, ActivationKind.RELU, ActivationKind.SWISH]


def main():
    args = parse_args(__doc__, "runs/linear", 2000)
    summary, results, out = sweep(args, "linear", KINDS, architecture=(10,))
    save_chart(out / "loss.svg", loss_curves(results, KINDS, args.seeds),
               "median train loss", "log10 cross-entropy")
    print_table(summary)
    for kind, entry in summary["activations"].items():
        full = sum(a == 1.0 and b == 1.0 for a, b in zip(entry["final_acc_train"], entry["final_acc_test"]))
        print(f"{kind:8s} full train/test accuracy in {full}/{args.seeds} seeds, "
              f"epochs to train accuracy 1.0: {entry['epochs_to_full_accuracy']}")
    print(f"outputs under {out}")


if __name__ == "__main__":
    main()
