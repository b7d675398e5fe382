"""alpha2 just above and below 2/M on a 20x20 mesh, at the default stopping
tolerance and at a tolerance far below rounding level.

    python scripts/divergence_window.py
"""

from uzawa_stokes.iterate import IterationConfig, run
from uzawa_stokes.saddle import estimate_extreme_eigen
from uzawa_stokes.stokes import build_mac_stokes

if __name__ == "__main__":
    prob = build_mac_stokes(20).problem()
    M = estimate_extreme_eigen(prob, "max", 1e-8, 2000).value
    print(f"M_est = {M!r}")
    for factor in (1.8, 2.2):
        for tol in (1e-6, 1e-30):
            h = run(prob, IterationConfig(alpha2=factor / M, tol=tol, max_outer=500))
            p_inc = h.column("p_inc")
            print(f"alpha2={factor}/M tol={tol:g}: iterations={h.iterations} converged={h.converged} "
                  f"diverged={h.diverged} min p_inc={p_inc.min():.3e} last p_inc={p_inc[-1]:.3e}")
