"""Free Bernoulli walks approach the semicircle law."""

from freefock import limits

for n in (1, 2, 4, 8):
    spec = limits.WalkSpec("brownian", n)
    ops = [limits.walk_moment(spec, k) for k in (2, 4, 6)]
    orc = [limits.walk_moment_oracle(spec, k) for k in (2, 4, 6)]
    print(f"n={n}  operator {[round(x, 6) for x in ops]}  oracle {[round(x, 6) for x in orc]}")

# the oracle path goes much further
for n in (8, 100, 10 ** 4, 10 ** 6):
    spec = limits.WalkSpec("brownian", n, inclusive=False)
    print(f"n={n:>7}  m4 = {limits.walk_moment_oracle(spec, 4):.8f}   (2 - 1/n = {2 - 1 / n:.8f})")

print("semicircle:", [limits.semicircle_moment(1, k) for k in range(1, 9)])
print("quadrature:", [round(limits.semicircle_quadrature_moment(1, k), 10) for k in range(1, 9)])
