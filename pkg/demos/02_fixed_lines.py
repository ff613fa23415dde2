"""
Fixed points and the two fixed lines
====================================

Besides the Gaussian and Heisenberg points there is a line of Ising-like and
a line of Cubic-like fixed points, labelled by k = g3/g2.  For |k| < 1 they
are real; for |k| > 1 they turn complex and come in conjugate pairs.
"""

from fractions import Fraction

import numpy as np

from z4rg.fixed_points import known_fixed_points, numeric_fixed_points, solve_series

# k = 3/5 keeps everything rational because sqrt(1 - k^2) = 4/5
for fp in solve_series(Fraction(3, 5)):
    print(f"{fp.label:22s}", *[str(c) for c in fp.coords], sep="  ")

# in the PT-broken phase the line couplings become imaginary
for fp in known_fixed_points(Fraction(5, 3)):
    if fp.is_line:
        print(f"{fp.label:22s} g2 = {fp.coords[1]}")

# the Ising-Cubic separation blows up like 1/sqrt(1 - k^2) at k -> 1
print("\n k        |I - C| sqrt(1-k^2)")
for k in (0.9, 0.99, 0.999, 0.9999):
    p = {fp.label: fp for fp in known_fixed_points(k)}
    d = p["IsingLine[principal]"].evaluate(1.0) - p["CubicLine[principal]"].evaluate(1.0)
    print(f" {k:<8} {np.linalg.norm(d) * np.sqrt(1 - k * k):.6f}")

# at finite eps the truncated betas have their own roots; at eps = 1 the
# Heisenberg one has already turned complex
print()
for fp, x in numeric_fixed_points(0, 1.0):
    print(f"{fp.label:22s} series {np.round(fp.evaluate(1.0), 4)}  root {np.round(x, 4)}")
