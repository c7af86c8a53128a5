"""Discrete creation, annihilation, gauge and times operators against the continuous ones."""

from freefock import grid
from freefock.approximation import DiscreteOpSpec, discrete_op_apply, full_op_apply, operator_convergence

e = grid.test_vector("exp-decay", grid.Grid(32, horizon=4))
for eps in "+-ox":
    print(f"eps={eps}  t=1/2  f=exp-decay")
    for r in operator_convergence(e, 0.5, eps):
        bound = "" if r.bound is None else f"  bound {r.bound:.5f}"
        print(f"  n={r.n:2d}  error {r.error:.5f}{bound}")

# t inside a partition cell: the discrete sum reaches the next point t^(n)
g = grid.Grid(6)
spec = DiscreteOpSpec("+", 0.5, grid.PartitionSpec.uniform(g, 3))
omega = grid.StepTensor.vacuum(g)
print("t^(n) =", spec.upper, " error on Omega:", (discrete_op_apply(spec, omega) - full_op_apply(spec, omega)).norm())
print("times on Omega:", discrete_op_apply(DiscreteOpSpec("x", 0.5, spec.partition), omega).f0)
