"""Outer-iteration counts over mesh size and beta at alpha2 = 1.5.

    python scripts/iteration_table.py [--out results/iteration_table.csv]
"""

import argparse
import csv
import os
import sys

from uzawa_stokes.cli import main

MESHES = [10, 20, 40]
BETAS = [0.0, 1e-4, 1e-2, 0.1]


def pivot(path):
    with open(path, encoding="utf-8") as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    counts = {(int(r["mesh_n"]), float(r["beta"])): r["iterations"] for r in rows}
    print("N     " + "".join(f"{b:>10g}" for b in BETAS))
    for n in MESHES:
        print(f"{n:<6d}" + "".join(f"{counts[n, b]:>10}" for b in BETAS))


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/iteration_table.csv")
    args = ap.parse_args()
    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    code = main(["sweep", "--set", "mesh_list=" + ",".join(map(str, MESHES)),
                 "--set", "beta_list=" + ",".join(map(repr, BETAS)), "--out", args.out])
    pivot(args.out)
    sys.exit(code)
