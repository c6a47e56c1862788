"""Digits 0 vs 1 with 25 hidden units: end-of-training Hessian eigenvalue distributions."""
import numpy as np
from _common import ROOT, parse_args, print_table, sweep

from meanfield.activations import ActivationKind
from meanfield.plots import histogram_svg, write_svg
from meanfield.spectrum import eig_histogram

KINDS = [ActivationKind.SWISH, ActivationKind.RELU]


def main():
    args = parse_args(__doc__, "runs/digits", 3000)
    summary, results, out = sweep(args, "digits", KINDS, architecture=(25,),
                                  digits_path=str(ROOT / "data" / "digits.csv"))
    for kind in KINDS:
        eigs = np.concatenate([results[(kind, s)].spectra[-1].eigenvalues for s in range(args.seeds)])
        edges, counts = eig_histogram(eigs, 60)
        write_svg(out / f"hist_{kind.value}.svg", histogram_svg(
            edges, counts, title=f"{kind.value}: final Hessian eigenvalues, all seeds",
            x_label="eigenvalue"))
    print_table(summary)
    sw = summary["activations"]["swish"]["eig_spread"]
    re = summary["activations"]["relu"]["eig_spread"]
    print(f"swish spread exceeds relu in {sum(a > b for a, b in zip(sw, re))}/{len(sw)} seeds")
    print(f"outputs under {out}")


if __name__ == "__main__":
    main()
