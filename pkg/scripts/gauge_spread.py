"""Spread of screen projectors over random gauges, point by point.

    python3 scripts/gauge_spread.py [--metric conformally_flat] [--gauges 20] [--seed 0]
"""

import argparse

import numpy as np

from lightlike import catalog as C
from lightlike.errors import ScreenUnavailable
from lightlike.nullframe import GaugeField
from lightlike.surface import LightlikeSurface


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--metric", default="minkowski", choices=["minkowski", "conformally_flat"])
    ap.add_argument("--gauges", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    metric = C.METRICS[args.metric]()
    surf = LightlikeSurface(metric, C.ellipsoid_null_congruence())
    bounds = surf.patch.param_bounds
    rng = np.random.default_rng(args.seed)
    gauged = [surf.with_gauge(GaugeField.random(rng, 4, bounds.mean(axis=1))) for _ in range(args.gauges)]
    builders = {
        "I1": lambda s, u: s.relative_screen(u, "I1"),
        "rootI2": lambda s, u: s.relative_screen(u, "rootI2"),
        "lambda2": lambda s, u: s.relative_screen(u, "lambda2"),
        "lambda2/lambda3": lambda s, u: s.absolute_screen(u, "lambda2/lambda3"),
    }
    print(f"{'u':>26} " + " ".join(f"{k:>16}" for k in builders))
    for u in np.array(np.meshgrid(*[np.linspace(lo, hi, 2) for lo, hi in bounds], indexing="ij")).reshape(3, -1).T:
        g = surf.frame(u).g
        cells = []
        for build in builders.values():
            try:
                P0 = build(surf, u).projector(g)
                spread = max(np.linalg.norm(build(o, u).projector(g) - P0) for o in gauged)
                cells.append(f"{spread:16.2e}")
            except ScreenUnavailable as exc:
                cells.append(f"{exc.reason[:16]:>16}")
        print(f"{np.array2string(u, precision=3):>26} " + " ".join(cells))


if __name__ == "__main__":
    main()
