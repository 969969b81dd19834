#!/usr/bin/env python3
"""Sweep the pair-creation envelopes against mean phonon number.

Produces one panel per drive strength g with the four initial-state families
(Fock, coherent, squeezed, squeezed-coherent) sharing the axis, plus a CSV
dump of the grid for downstream fitting.
"""

import argparse
import csv
import pathlib

import numpy as np

from fermibag.transitions import sweep_figure1


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", type=float, nargs="+", default=[0.0, 0.5, 1.0],
                    help="drive strengths to sweep (one panel each)")
    ap.add_argument("--n-stop", type=float, default=6.0)
    ap.add_argument("--n-step", type=float, default=0.05)
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path("figure1_out"))
    args = ap.parse_args()

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    args.out.mkdir(parents=True, exist_ok=True)
    grid = np.arange(0.0, args.n_stop + 0.5 * args.n_step, args.n_step)

    fig, axes = plt.subplots(1, len(args.g), figsize=(4.2 * len(args.g), 3.4),
                             sharey=True, squeeze=False)
    for ax, g in zip(axes[0], args.g):
        rows = sweep_figure1(g, grid)
        ax.plot(grid, [r.gamma_c for r in rows], color="tab:blue", label="coherent")
        ax.plot(grid, [r.gamma_s for r in rows], color="tab:green", label="squeezed")
        ax.plot(grid, [r.gamma_sc for r in rows], color="tab:red", label="sq-coherent")
        fock = [(r.n_phon, r.gamma_f) for r in rows if r.gamma_f is not None]
        ax.plot(*zip(*fock), "ko", ms=4, label="Fock")
        ax.set_title(f"g = {g:g}")
        ax.set_xlabel("mean phonon number N")

        with open(args.out / f"envelopes_g{g:g}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "gamma_f", "gamma_c", "gamma_s", "gamma_sc"])
            for r in rows:
                w.writerow([r.n_phon, "" if r.gamma_f is None else r.gamma_f,
                            r.gamma_c, r.gamma_s, r.gamma_sc])

    axes[0][0].set_ylabel("envelope Gamma")
    axes[0][0].legend(frameon=False, fontsize=8)
    fig.tight_layout()
    png = args.out / "figure1.png"
    fig.savefig(png, dpi=160)
    print(f"wrote {png} and per-panel CSVs in {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
