#!/usr/bin/env python3
"""Sweep the (p, a) plane and write the winding phase diagram to CSV.

Equivalent to ``chiralwalk sweep`` with the default grids; kept as a script
so the output lands next to the other experiment artifacts.
"""

import sys

from chiralwalk.cli import main as cli_main

OUT = sys.argv[1] if len(sys.argv) > 1 else "winding_phase_diagram.csv"

if __name__ == "__main__":
    code = cli_main(["sweep",
                     "--p-grid", "0,0.25,0.5,0.75",
                     "--a-grid=-0.95:0.95:0.05",
                     "--samples", "4096",
                     "--out", OUT])
    print(f"wrote {OUT}" if code == 0 else f"sweep failed with exit code {code}")
    sys.exit(code)
