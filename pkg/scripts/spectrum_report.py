"""Estimated Schur bounds m, M and 1/M for a list of meshes.

    python scripts/spectrum_report.py 4 10 20
"""

import sys

from uzawa_stokes.cli import main

if __name__ == "__main__":
    meshes = [int(a) for a in sys.argv[1:]] or [4, 10, 20]
    worst = 0
    for n in meshes:
        print(f"# mesh {n}", flush=True)
        worst = max(worst, main(["spectrum", "--set", f"mesh_n={n}"]))
    sys.exit(worst)
