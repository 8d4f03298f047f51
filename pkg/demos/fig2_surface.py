"""cos Omega over the (beta, beta_v) square, written as CSV and SVG heatmaps.

Usage: python demos/fig2_surface.py [OUTPUT_DIR]
"""
import math
import sys
from pathlib import Path

from pairboost.cli import main

out = Path(sys.argv[1] if len(sys.argv) > 1 else "fig2_out")
out.mkdir(parents=True, exist_ok=True)

for tag, alpha in (("a", math.pi / 4), ("b", math.pi / 2)):
    stem = out / f"fig2{tag}"
    code = main(["fig2", "--alpha", repr(alpha), "--grid", "200", "--out", f"{stem}.csv", "--svg", f"{stem}.svg"])
    print(f"alpha = {alpha:.4f}: exit {code}, wrote {stem}.csv and {stem}.svg")
