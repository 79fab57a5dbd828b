#!/usr/bin/env python3
"""Walk-index demo: exact dyadic pairing vs seeded Monte Carlo.

Takes a walk JSON file (defaults to configs/level2_walk.json) and prints the
exact report, a Monte Carlo estimate, and their agreement, for the uniform
measure and a skewed Bernoulli measure.
"""

import sys
from pathlib import Path

from chiralwalk.cantor import ProductMeasure
from chiralwalk.index import s_index_exact, s_index_montecarlo
from chiralwalk.walk import parse_walk

WALK = sys.argv[1] if len(sys.argv) > 1 else "configs/level2_walk.json"
SAMPLES = 4000
SEED = 0


def main():
    w = parse_walk(Path(WALK).read_text())
    print(f"walk: {WALK}  (p = {w.p:.4f}, {len(w.cells)} cells)")
    for label, measure in [("uniform", ProductMeasure.uniform()),
                           ("bernoulli(1/3)", ProductMeasure.bernoulli(1 / 3))]:
        exact = s_index_exact(w, measure)
        mc = s_index_montecarlo(w, measure, SAMPLES, seed=SEED)
        gap = abs(mc.numeric - exact.numeric)
        print(f"\nmeasure = {label}")
        if exact.exact is not None:
            print(f"  exact dyadic : {exact.exact}  ({exact.numeric})")
        else:
            print(f"  exact value  : {exact.numeric}")
        print(f"  per cell     : " + ", ".join(
            f"{c.prefix or 'K'}:{c.winding:+d}*{c.measure:g}" for c in exact.per_cell))
        print(f"  monte carlo  : {mc.numeric} +- {mc.mc_stderr:.4f} "
              f"({SAMPLES} samples, seed {SEED})")
        print(f"  |mc - exact| : {gap:.4f}  (3 stderr = {3 * mc.mc_stderr:.4f})")


if __name__ == "__main__":
    main()
