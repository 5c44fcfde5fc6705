"""A polynomial null curve that is not pseudo-arc parametrized.

The curve is routed through numeric reparametrization; its curvatures
vary, so no constants satisfy alpha k1 + beta k2 = 1 and the fit fails.

    python scripts/general_curve_demo.py [--samples N]
"""

import argparse

import numpy as np

from nullbertrand.bertrand import classical_bertrand_obstruction, fit_constants
from nullbertrand.curves import curve_from_spec, pseudo_arc_residual, spec_from_strings
from nullbertrand.errors import NoSolution
from nullbertrand.frame import frame_at

COMPONENTS = ["s + s^3/3 + s^5/5", "s^2", "2*s^3/3", "s - s^3/3 - s^5/5"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=6)
    args = ap.parse_args()
    spec = spec_from_strings("null_poly", COMPONENTS, {}, (0.5, 1.5), "general")
    curve = curve_from_spec(spec)
    lo, hi = curve.domain
    print(f"pseudo-arc length of [0.5, 1.5]: {hi - lo:.12f}")
    grid = [float(s) for s in np.linspace(lo, hi, args.samples + 2)[1:-1]]
    print("sigma            k1               k2               null/unit residual  frenet")
    for s in grid:
        f = frame_at(curve, s)
        n, u = pseudo_arc_residual(curve, s)
        print(f"{s:<16.10f} {f.k1:<16.10f} {f.k2:<16.10f} {max(n, u):<19.1e} {f.frenet_residual:.1e}")
    try:
        fit = fit_constants(curve, grid)
        print(f"fit: {fit.description}")
    except NoSolution as exc:
        print(f"fit: {exc}")
    obs = classical_bertrand_obstruction(curve, grid)
    print(f"classical obstruction {obs.obstruction:.4f}, k1 constant: {obs.k1_constant}")


if __name__ == "__main__":
    main()
