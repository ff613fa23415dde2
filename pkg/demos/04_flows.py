"""
RG flows on the planes g3 = k g2
================================

Trajectories of the truncated two-loop flow and the reduced vector field.
Writes CSV files next to this script when run with an argument.
"""

import sys
from pathlib import Path

import numpy as np

from z4rg.flow import integrate, integrate_batch, vector_field
from z4rg.serialize import trajectory_csv

# at eps = 0.1 a start on the g1 axis settles onto the Heisenberg point
tr = integrate((0.01, 0, 0), 0.1, 2000.0, step=1e-2, sample_every=1000)
print("eps=0.1:", tr.terminal, tr.converged_to, np.round(tr.final.real, 6))

# at eps = 1 the truncated flow has no real Heisenberg root and runs away
tr = integrate((0.01, 0, 0), 1.0, 20.0)
print("eps=1  :", tr.terminal, f"at t = {tr.t[-1]:.3f}")

# g3/g2 is conserved to rounding along the way
tr = integrate((0.01, 0.30, 0.24), 1.0, 20.0)
print("k0 =", tr.k0.real, " drift =", tr.invariant_drift)

# fifty random starts near the origin at k = 0
rng = np.random.default_rng(1)
g = rng.uniform(0, 0.1, (50, 2))
runs = integrate_batch(np.column_stack([g, np.zeros(50)]), 1.0, 60.0, sample_every=10**9)
print("basin tally:", {t: sum(r.terminal == t for r in runs) for t in sorted({r.terminal for r in runs})})

# the reduced field: which fixed points are visible on each plane
for k in (0, 0.8, 1.5):
    vf = vector_field(k, (-0.5, 1.5), (-0.5, 1.5), (21, 21), eps=1.0)
    print(f"k={k}: real points {[p.label for p in vf.fixed_points]}, lines present: {vf.lines_present}")

if len(sys.argv) > 1:
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "traj_k08.csv", "w", newline="\n") as fh:
        fh.write(trajectory_csv(tr))
    print("wrote", out / "traj_k08.csv")
