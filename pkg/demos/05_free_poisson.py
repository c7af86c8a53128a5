"""The free Poisson walk and the Marchenko-Pastur density."""

from freefock import limits

law = limits.bernoulli_law("poisson", 4)
print("step law at n=4:", law.atoms)
print("step moments   :", [round(limits.step_moment("poisson", 4, k), 10) for k in range(1, 6)])
print("law moments    :", [round(law.moment(k), 10) for k in range(1, 6)])

for n in (1, 2, 4, 8, 10 ** 3, 10 ** 6):
    spec = limits.WalkSpec("poisson", n, inclusive=False)
    print(f"n={n:>7}", [round(limits.walk_moment_oracle(spec, k), 4) for k in range(1, 7)])
print("limit     ", [limits.free_poisson_moment(1, k) for k in range(1, 7)])

# below rate one the law has an atom at zero
for rate in (0.5, 1.0, 2.0):
    q = [limits.free_poisson_quadrature_moment(rate, k) for k in range(0, 5)]
    print(f"rate={rate}  quadrature {[round(x, 8) for x in q]}")
