"""Predicted (companion recursion) vs. observed convergence on a small mesh.

Runs each (beta, alpha2) grid point twice: with the lid forcing, and with an
added random body force that excites every Schur eigenmode. Prints a map with
one symbol per point: '.' agree-converge, '#' agree-diverge, 'o' predicted
divergent but converged, 'x' predicted convergent but did not converge.

    python scripts/stability_map.py [--mesh 4] [--points 10]
"""

import argparse

import numpy as np

from uzawa_stokes.iterate import IterationConfig, run
from uzawa_stokes.oracle import companion_spectral_radius, exact_schur_spectrum
from uzawa_stokes.stokes import build_mac_stokes


def stability_map(prob, lam, betas, alphas):
    rows = []
    for beta in betas:
        line = ""
        for alpha2 in alphas:
            rho = companion_spectral_radius(lam, alpha2, beta)
            conv = run(prob, IterationConfig(alpha2=alpha2, beta=beta)).converged
            line += {(True, True): ".", (False, False): "#", (False, True): "o", (True, False): "x"}[(rho < 1, conv)]
        rows.append((beta, line))
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--mesh", type=int, default=4)
    ap.add_argument("--points", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    prob = build_mac_stokes(args.mesh).problem()
    lam = exact_schur_spectrum(prob)
    print(f"# zero-mean Schur spectrum in [{lam[0]:.6g}, {lam[-1]:.6g}]")
    betas = np.linspace(0.0, 0.5, args.points)
    alphas = np.linspace(0.1, 3.0, args.points)
    noisy = prob.replace(f=prob.f + np.random.default_rng(args.seed).standard_normal(prob.n_u))
    for label, p in (("lid forcing", prob), ("lid + random body force", noisy)):
        print(f"# {label}; rows beta, columns alpha2 in [{alphas[0]}, {alphas[-1]}]")
        for beta, line in stability_map(p, lam, betas, alphas):
            print(f"{beta:6.3f} {line}")
