"""
Example II: Q_x = | |V_g f|^2 - |V_g f_x|^2 | on a hexagonal-type lattice.

Shifts live on B Z^2 with B = 5 [[1, 0], [-1/sqrt 3, 2/sqrt 3]]; the spectrograms
must agree on the reciprocal lattice B^{-T} Z^2 in frequency, for every x.  We
evaluate Q_x on [-1, 1]^2 at x = (a + b) / 2 for the 3-term and 4-term pairs and
write CSV grids (and contour plots if matplotlib is available).
"""

import math
import sys
from pathlib import Path

import numpy as np

from phaseless import AtomSum, Lattice, SemiDiscrete, SympWord, build
from phaseless.cli import grid_csv
from phaseless.lattice import enumerate_points
from phaseless.sequences import CoeffSeq
from phaseless.verify import GridSpec, qx_grid, qx_points

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-out")
out.mkdir(exist_ok=True)

B = 5 * np.array([[1.0, 0.0], [-1 / math.sqrt(3), 2 / math.sqrt(3)]])
sampling = Lattice(np.linalg.inv(B).T)
x = (B[:, 0] + B[:, 1]) / 2
g = AtomSum.gaussian(1 / np.pi, 2)
spec = GridSpec.cube(-1.0, 1.0, 201, 2)

nodes = enumerate_points(sampling, 2.0)
nodes = nodes[np.all(np.abs(nodes) <= 1.0 + 1e-12, axis=1)]
print(f"x = {x.round(4)}, {len(nodes)} dual nodes in [-1, 1]^2")

coeffs = {(0, 0): 1, (1, 0): 1j, (0, 1): 1 + 1j}
for label, extra in (("f2", {}), ("f3", {(1, 1): 0.5 + 0.5j})):
    pair = build(SemiDiscrete(SympWord.identity(2), sampling), g, CoeffSeq(Lattice(B), {**coeffs, **extra}))
    Q = qx_grid(pair, x, spec)
    at_nodes = qx_points(pair, x, nodes)
    print(f"{label}: max Q = {Q.max():.3e}, max Q at nodes / max Q = {at_nodes.max() / Q.max():.1e}")
    (out / f"qx-{label}.csv").write_text(grid_csv(spec, Q))
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        continue
    w1, w2 = spec.axes()
    fig, ax = plt.subplots(figsize=(5, 4.4))
    fig.colorbar(ax.contourf(w1, w2, Q.T, levels=30), ax=ax)
    ax.plot(nodes[:, 0], nodes[:, 1], "o", color="white", ms=3)
    ax.set_title(f"$Q_x$ for {label}")
    fig.savefig(out / f"qx-{label}.png", dpi=120)
    plt.close(fig)
print(f"grids written to {out}/")
