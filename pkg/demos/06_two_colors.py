"""Multiplicity two: a non-commuting and a commuting pair built from matrix units."""

import numpy as np

from freefock import limits

report = limits.multiplicity_demo()
for name, m in report.matrices.items():
    print(name)
    print(m.astype(int))
print("[Y1, Y2] =\n", report.commutator_y.astype(int))
print("[Z1, Z2] is zero:", not np.any(report.commutator_z))

# the Z pair has a classical joint law
print("  m  n   tau(Z1^m Z2^n)   integral over mu")
for m, n, tau, mu in report.z_moments[:10]:
    print(f"{m:3d}{n:3d}   {tau:12.6f}   {float(mu):12.6f}")

for family in "YZ":
    for n in (1, 2, 4):
        t = limits.two_dim_walk_moments(family, n)
        print(family, n, {k: round(v, 6) for k, v in t.rows()})
