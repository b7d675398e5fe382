"""Discrete divergence per iteration for the regularized vs. unit lid.

Writes the CSV and, if matplotlib is available, a semilog plot next to it.

    python scripts/divnorm_history.py [--mesh 40] [--out results/divnorm.csv]
"""

import argparse
import csv
import os
import sys

from uzawa_stokes.cli import main

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--mesh", type=int, default=40)
    ap.add_argument("--out", default="results/divnorm.csv")
    args = ap.parse_args()
    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    code = main(["divnorm", "--set", f"mesh_n={args.mesh}", "--out", args.out])
    with open(args.out, encoding="utf-8") as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit(code)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for key, label in (("div_norm_regularized", "4x(1-x) lid"), ("div_norm_unit", "unit lid")):
        pts = [(int(r["iter"]), float(r[key])) for r in rows if r[key]]
        ax.semilogy(*zip(*pts), label=label)
    ax.set_xlabel("iteration")
    ax.set_ylabel("||div u||")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out.rsplit(".", 1)[0] + ".png", dpi=120)
    sys.exit(code)
