"""
Stability and critical exponents
================================

With dg/dt = -beta (t growing toward the infrared) a direction is attractive
when the stability-matrix eigenvalue has positive real part.
"""

from fractions import Fraction

from z4rg.exponents import exponents_at
from z4rg.fixed_points import known_fixed_points
from z4rg.stability import classify, classify_series

for eps in (0.1, 0.5, 1.0):
    print(f"eps = {eps}")
    for fp in known_fixed_points(0):
        r = classify(fp, eps)
        lam = ", ".join(f"{z.real:+.4f}" for z in r.eigenvalues)
        print(f"  {fp.label:22s} [{lam}]  {r.classes}")

# the Heisenberg eigenvalues as series: the doubly degenerate one is
# eps/5 - eps^2/5, so at eps = 1 the point is only marginally stable
lams, _ = classify_series(known_fixed_points(0)[1])
print("Heisenberg eigenvalue series:", *lams, sep="\n  ")

# exponents do not depend on k, and stay real in the broken phase
for k in (0, Fraction(3, 5), Fraction(5, 3)):
    for fp in known_fixed_points(k):
        x = exponents_at(fp)
        print(f"k={str(k):4s} {fp.label:22s} eta = {x.eta}   nu = {x.nu}")
