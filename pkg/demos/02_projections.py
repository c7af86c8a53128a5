"""Projecting full Fock space vectors onto the toy space of a partition."""

from math import sqrt

from freefock import grid
from freefock.approximation import projection_convergence

g = grid.Grid(32)
for name in ("x-on-unit", "square-indicator"):
    f = grid.test_vector(name, g)
    print(name)
    for r in projection_convergence(f, (2, 4, 8, 16, 32)):
        closed = 1 / (r.n * sqrt(12)) if name == "x-on-unit" else 1 / sqrt(r.n)
        print(f"  n={r.n:2d}  ||P f - f|| = {r.error:.12f}   closed form {closed:.12f}")

# the square loses its diagonal blocks: adapted words never repeat an interval
S = grid.PartitionSpec.uniform(g, 4)
sq = grid.test_vector("square-indicator", g)
print("mass kept by P_4:", grid.project(S, sq).norm() ** 2)

# e^{-x} on [0, 4) needs the longer horizon
e = grid.test_vector("exp-decay", grid.Grid(32, horizon=4))
print([round(r.error, 5) for r in projection_convergence(e, (1, 2, 4, 8, 16, 32))])
